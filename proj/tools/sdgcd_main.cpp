#include "sdg/runner.hpp"

int main(int argc, char** argv) { return sdg::cli_main(argc, argv); }
