#include "colorenh/cli.hpp"

int main(int argc, char** argv) {
    return colorenh::cli_main(argc, argv);
}
