#include "mcnv/cli.hpp"

int main(int argc, char** argv) { return mcnv::cli_main(argc, argv); }
