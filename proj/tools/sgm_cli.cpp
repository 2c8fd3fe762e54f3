#include "sgm/cli.hpp"

int main(int argc, char** argv) { return sgm::cli_main(argc, argv); }
