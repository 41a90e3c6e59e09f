package demo.optional;

import java.util.Random;

public class OrElseAndOrElseGet {
    public int roll() {
        Random random = new Random();
        return random.nextInt(6);
    }

    public String pick(String a, String b) {
        return new java.util.Random().nextBoolean() ? a : b;
    }
}
