public final class MathUtil {
    public static final int LIMIT = 1000;

    private MathUtil() {
    }

    public static int square(int x) {
        return x * x;
    }

    public static int clamp(int x) {
        if (x > LIMIT) {
            return LIMIT;
        }
        return x;
    }
}
