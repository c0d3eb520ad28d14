#include "fogplace/cli.hpp"

int main(int argc, char** argv) { return fogplace::cli::run(argc, argv); }
