public class SinglyLinkedList {
    Entry header;
    int size;

    static class Entry {
        Object element;
        Entry next;
    }

    boolean sizeOk() {
        int n = 0;
        Entry e = header;
        while (e != null) {
            n++;
            e = e.next;
        }
        return n == size;
    }

    boolean headerOk() {
        return size == 0 || header != null;
    }

    boolean elementsOk() {
        for (Entry e = header; e != null; e = e.next) {
            if (e.element == null) {
                return false;
            }
        }
        return true;
    }

    boolean inv_1() {
        return sizeOk();
    }

    boolean inv_2() {
        return headerOk();
    }

    boolean inv_3() {
        return elementsOk();
    }

    boolean inv_12() {
        return sizeOk() && headerOk();
    }

    boolean inv_13() {
        return sizeOk() && elementsOk();
    }

    boolean inv_23() {
        return headerOk() && elementsOk();
    }

    boolean inv_123() {
        return sizeOk() && headerOk() && elementsOk();
    }
}
