#include "commands.hpp"

int main(int argc, char** argv) { return sdnlb::cli::run(argc, argv); }
