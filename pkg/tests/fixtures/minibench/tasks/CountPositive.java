public class CountPositive {
    /*@ requires a != null;
      @ ensures \result >= 0 && \result <= a.length;
      @*/
    public static int countPositive(int[] a) {
        int n = 0;
        for (int i = 0; i < a.length; i++) {
            if (a[i] > 0) {
                n++;
            } else if (a[i] < -100) {
                n = n + 0;
            }
        }
        return n;
    }
}
