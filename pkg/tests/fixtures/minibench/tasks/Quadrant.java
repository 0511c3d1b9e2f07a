public class Quadrant {
    /*@ requires x != 0 && y != 0;
      @ ensures (x > 0 && y > 0) ==> \result == 1;
      @ ensures (x < 0 && y > 0) ==> \result == 2
      @ ensures (x < 0 && y < 0) ==> \result == 3;
      @*/
    public static int quadrant(int x, int y) {
        if (x > 0) {
            if (y > 0) { return 1; } else { return 4; }
        } else {
            if (y > 0) { return 2; } else { return 3; }
        }
    }
}
