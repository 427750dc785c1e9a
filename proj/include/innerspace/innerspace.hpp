#pragma once

#include "innerspace/beurling.hpp"
#include "innerspace/inner.hpp"
#include "innerspace/io.hpp"
#include "innerspace/oracle.hpp"
#include "innerspace/schur.hpp"
#include "innerspace/seq.hpp"
#include "innerspace/tolerance.hpp"
