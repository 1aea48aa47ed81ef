#include "chronogram/pipeline.hpp"

int main(int argc, char** argv) { return chronogram::run_cli(argc, argv); }
