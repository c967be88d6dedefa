#include "psec/cli.hpp"

int main(int argc, char** argv) { return psec::cli::dispatch(argc, argv); }
