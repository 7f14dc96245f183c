#include "ewit/cli.hpp"

int main(int argc, char** argv) { return ewit::cli::run(argc, argv); }
