public class Counter {
    private int count;
    private int limit;
    private String name;
    private boolean active;

    public Counter(String name, int limit) {
        this.name = name;
        this.limit = limit;
        this.active = true;
    }

    public void increment() {
        if (active && count < limit) {
            count++;
        }
    }

    public int getCount() {
        return count;
    }

    public String getName() {
        return name;
    }
}
