#include "minsurf/batch.hpp"

int main(int argc, char** argv) { return minsurf::run(argc, argv); }
