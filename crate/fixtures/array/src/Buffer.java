public class Buffer {
    private int[] data;
    private int count;

    public Buffer(int capacity) {
        data = new int[capacity];
    }

    public boolean checkCount() {
        return count >= 0 && count <= data.length;
    }

    public boolean checkNonNegative() {
        for (int i = 0; i < count; i++) {
            if (data[i] < 0) {
                return false;
            }
        }
        return true;
    }
}
