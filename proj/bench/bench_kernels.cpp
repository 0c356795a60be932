#include <iostream>
int main() { std::cout << "bench placeholder\n"; }
