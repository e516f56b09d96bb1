#include "vne/cli.hpp"

int main(int argc, char** argv) { return vne::dispatch(argc, argv); }
