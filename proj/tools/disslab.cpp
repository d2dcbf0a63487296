#include "disslab/runner.hpp"

int main(int argc, char** argv) { return disslab::run_cli(argc, argv); }
