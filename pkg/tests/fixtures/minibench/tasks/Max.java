public class Max {
    //@ ensures \result >= a && \result >= b;
    public static int max(int a, int b) {
        if (a >= b) {
            return a;
        } else {
            return b;
        }
    }
}
