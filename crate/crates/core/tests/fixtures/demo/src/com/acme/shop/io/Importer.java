package com.acme.shop.io;

class Importer {
    private int total;

    void tally() {
        total = f(a);
        total = f(a, a);
        total = f(a, a, a);
        total = f(a, a, a, a);
        total = f(a, a, a, a, a);
        total = f(a, a, a, a, a, a);
        total = f(a, a, a, a, a, a, a);
        total = f(a, a, a, a, a, a, a, a);
        return;
    }
}
