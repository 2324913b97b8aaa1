#include "mipt/cli.hpp"

int main(int argc, char** argv) { return mipt::cli::run(argc, argv); }
