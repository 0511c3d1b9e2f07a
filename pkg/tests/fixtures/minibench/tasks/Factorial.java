public class Factorial {
    /*@ requires 0 <= n && n <= 12;
      @ ensures \result >= 1;
      @*/
    public static int factorial(int n) {
        int f = 1;
        for (int i = 2; i <= n; i++) {
            f = f * i;
        }
        return f;
    }
}
