#include <catch2/catch_amalgamated.hpp>
#include "innerspace/innerspace.hpp"
