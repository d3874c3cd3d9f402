#include "ksd/cli.hpp"

int main(int argc, char** argv) { return ksd::cli::run(argc, argv); }
