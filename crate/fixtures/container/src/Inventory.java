import java.util.ArrayList;
import java.util.List;

public class Inventory {
    private List<Item> items = new ArrayList<>();

    public boolean checkWeights() {
        for (Item it : items) {
            if (it.weight < 0) {
                return false;
            }
        }
        return true;
    }

    public boolean checkNotNull() {
        return items != null;
    }
}

class Item {
    int weight;
    String name;
}
