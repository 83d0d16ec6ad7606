#include "gridcarve/runner.hpp"

int main(int argc, char** argv) {
    return gridcarve::run_cli(argc, argv);
}
