#include "crnc/cli.hpp"

int main(int argc, char** argv) { return crnc::run_cli(argc, argv); }
