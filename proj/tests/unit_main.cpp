// unit_main.cpp - doctest driver for the unit suites
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
