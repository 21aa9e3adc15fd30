#include "mixphase/cli.hpp"

int main(int argc, char** argv) { return mixphase::cli_dispatch(argc, argv); }
