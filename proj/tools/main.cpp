#include "extbwt/cli.hpp"

int main(int argc, char** argv) {
    return extbwt::cli::main(argc, argv);
}
