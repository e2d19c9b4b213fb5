#include "swiptsim/harness.hpp"

int main(int argc, char** argv) { return swiptsim::cli(argc, argv); }
