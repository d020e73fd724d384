#include "lcgf/cli.hpp"

int main(int argc, char** argv) { return lcgf::cli::run(argc, argv); }
