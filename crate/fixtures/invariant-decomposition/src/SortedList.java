public class SortedList {
    Node head;
    int size;

    static class Node {
        int value;
        Node next;
    }

    boolean sortedOk() {
        for (Node n = head; n != null && n.next != null; n = n.next) {
            if (n.value > n.next.value) {
                return false;
            }
        }
        return true;
    }

    boolean sizeOk() {
        int count = 0;
        Node n = head;
        while (n != null) {
            count++;
            n = n.next;
        }
        return count == size;
    }

    boolean sizeNonNegative() {
        return size >= 0;
    }

    boolean headOk() {
        return size == 0 ? head == null : head != null;
    }

    boolean inv_1() {
        return sortedOk();
    }

    boolean inv_2() {
        return sizeOk();
    }

    boolean inv_3() {
        return sizeNonNegative();
    }

    boolean inv_4() {
        return headOk();
    }

    boolean inv_12() {
        return sortedOk() && sizeOk();
    }

    boolean inv_13() {
        return sortedOk() && sizeNonNegative();
    }

    boolean inv_14() {
        return sortedOk() && headOk();
    }

    boolean inv_23() {
        return sizeOk() && sizeNonNegative();
    }

    boolean inv_24() {
        return sizeOk() && headOk();
    }

    boolean inv_34() {
        return sizeNonNegative() && headOk();
    }

    boolean inv_123() {
        return sortedOk() && sizeOk() && sizeNonNegative();
    }

    boolean inv_124() {
        return sortedOk() && sizeOk() && headOk();
    }

    boolean inv_134() {
        return sortedOk() && sizeNonNegative() && headOk();
    }

    boolean inv_234() {
        return sizeOk() && sizeNonNegative() && headOk();
    }

    boolean inv_1234() {
        return sortedOk() && sizeOk() && sizeNonNegative() && headOk();
    }
}
