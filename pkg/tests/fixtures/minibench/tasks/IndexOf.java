public class IndexOf {
    /*@ requires a != null;
      @ ensures (\result == -1 && (\forall int i; 0 <= i && i < a.length; a[i] != k))
      @      || (0 <= \result && \result < a.length && a[\result] == k
      @          && (\forall int j; 0 <= j && j < \result; a[j] != k));
      @*/
    public static int indexOf(int[] a, int k) {
        for (int i = 0; i < a.length; i++) {
            if (a[i] == k) {
                return i;
            }
        }
        return -1;
    }
}
