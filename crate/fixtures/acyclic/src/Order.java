public class Order {
    Customer customer;
    int quantity;

    boolean checkCustomer() {
        return customer != null && customer.id > 0;
    }
}

class Customer {
    int id;
    String email;
}
