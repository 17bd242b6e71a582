#include "wmbo/cli.hpp"

int main(int argc, char** argv) { return wmbo::run_cli(argc, argv); }
