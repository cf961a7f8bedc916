#include "oimp/harness.hpp"

int main(int argc, char** argv) { return oimp::cli_main(argc, argv); }
