abstract class Shape {
    int id;
}

public class Chain extends Shape {
    String label;
    Chain next;

    boolean checkIds() {
        Chain p = this;
        while (p != null) {
            if (p.id < 0) {
                return false;
            }
            p = p.next;
        }
        return true;
    }
}
