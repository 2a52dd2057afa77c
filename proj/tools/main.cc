#include "hofa/cli.h"

int main(int argc, char** argv) { return hofa::run(argc, argv); }
