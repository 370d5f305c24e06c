#include "rellich/rellich_c.h"

int main(int argc, char** argv) { return rellich_main(argc, argv); }
