public class BinaryTree {
    Node root;
    int size;

    static class Node {
        int key;
        Node left;
        Node right;
    }

    boolean rootOk() {
        return size == 0 ? root == null : root != null;
    }

    boolean sizeOk() {
        return count(root) == size;
    }

    int count(Node n) {
        if (n == null) {
            return 0;
        }
        return 1 + count(n.left) + count(n.right);
    }

    boolean leftSpineOk() {
        for (Node n = root; n != null; n = n.left) {
            if (n.key < 0) {
                return false;
            }
        }
        return true;
    }

    boolean inv_1() {
        return rootOk();
    }

    boolean inv_2() {
        return sizeOk();
    }

    boolean inv_3() {
        return leftSpineOk();
    }

    boolean inv_12() {
        return rootOk() && sizeOk();
    }

    boolean inv_13() {
        return rootOk() && leftSpineOk();
    }

    boolean inv_23() {
        return sizeOk() && leftSpineOk();
    }

    boolean inv_123() {
        return rootOk() && sizeOk() && leftSpineOk();
    }
}
