public class HeapArray {
    int[] array;
    int size;
    int capacity;

    boolean sizeOk() {
        return size >= 0 && size <= array.length;
    }

    boolean heapOk() {
        for (int i = 1; i < size; i++) {
            if (array[(i - 1) / 2] > array[i]) {
                return false;
            }
        }
        return true;
    }

    boolean capacityOk() {
        return capacity == array.length;
    }

    boolean nonNegative() {
        for (int i = 0; i < size; i++) {
            if (array[i] < 0) {
                return false;
            }
        }
        return true;
    }

    boolean inv_1() {
        return sizeOk();
    }

    boolean inv_2() {
        return heapOk();
    }

    boolean inv_3() {
        return capacityOk();
    }

    boolean inv_4() {
        return nonNegative();
    }

    boolean inv_12() {
        return sizeOk() && heapOk();
    }

    boolean inv_13() {
        return sizeOk() && capacityOk();
    }

    boolean inv_14() {
        return sizeOk() && nonNegative();
    }

    boolean inv_23() {
        return heapOk() && capacityOk();
    }

    boolean inv_24() {
        return heapOk() && nonNegative();
    }

    boolean inv_34() {
        return capacityOk() && nonNegative();
    }

    boolean inv_123() {
        return sizeOk() && heapOk() && capacityOk();
    }

    boolean inv_124() {
        return sizeOk() && heapOk() && nonNegative();
    }

    boolean inv_134() {
        return sizeOk() && capacityOk() && nonNegative();
    }

    boolean inv_234() {
        return heapOk() && capacityOk() && nonNegative();
    }

    boolean inv_1234() {
        return sizeOk() && heapOk() && capacityOk() && nonNegative();
    }
}
