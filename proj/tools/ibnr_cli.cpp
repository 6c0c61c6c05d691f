#include "ibnr/cli.hpp"

int main(int argc, char** argv) { return ibnr::cli::run(argc, argv); }
