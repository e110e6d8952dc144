#include "commands.hpp"

int main(int argc, char** argv) { return mstree::cli::run(argc, argv); }
