#include "latentlens_cli/cli.hpp"

int main(int argc, char** argv) { return latentlens::cli::dispatch(argc, argv); }
