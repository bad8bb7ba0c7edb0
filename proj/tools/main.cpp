#include <iostream>

int main() {
    std::cout << "anchorplan cli placeholder\n";
    return 0;
}
