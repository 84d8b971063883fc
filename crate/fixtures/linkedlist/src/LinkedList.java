package fixtures.util;

/**
 * Doubly-linked list in the shape of java.util.LinkedList, reduced to its
 * state and the two checks used as oracles.
 */
public class LinkedList<E> {
    transient int size = 0;
    transient Node<E> first;
    transient Node<E> last;

    public LinkedList() {
    }

    public boolean isEmpty() {
        return size == 0;
    }

    public boolean checkSize() {
        int count = 0;
        Node<E> current = first;
        while (current != null) {
            count++;
            current = current.next;
        }
        return count == size;
    }

    private static class Node<E> {
        E item;
        Node<E> next;
        Node<E> prev;

        Node(Node<E> prev, E element, Node<E> next) {
            this.item = element;
            this.next = next;
            this.prev = prev;
        }
    }
}
