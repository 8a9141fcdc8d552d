#include <cstdio>

int main(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::puts("spclass: command-line interface under construction");
    return 0;
}
