#include "otlab/cli.hpp"

int main(int argc, char** argv) { return otlab::cli::run_cli(argc, argv); }
