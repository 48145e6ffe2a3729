#include "chaosim/run.hpp"

int main(int argc, char** argv) { return chaosim::run_main(argc, argv); }
