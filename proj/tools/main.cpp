#include "config.hpp"

int main(int argc, char** argv) { return tangle::cli::run_cli(argc, argv); }
