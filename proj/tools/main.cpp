#include "cmlab/cli.hpp"

int main(int argc, char** argv) { return cmlab::cli::run(argc, argv); }
