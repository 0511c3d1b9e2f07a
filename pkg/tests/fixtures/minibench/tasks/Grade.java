public class Grade {
    /*@ requires 0 <= score && score <= 100;
      @ ensures score >= 90 ==> \result == 'A';
      @ ensures (score >= 80 && score < 90) ==> \result == 'B';
      @ ensures score < 80 ==> \result == 'F';
      @*/
    public static char grade(int score) {
        if (score >= 80) {
            if (score >= 90) { return 'A'; }
            return 'B';
        } else {
            if (score >= 60) { return 'C'; }
            return 'F';
        }
    }
}
