#pragma once

#include "riffle/numeric.hpp"
#include "riffle/deck.hpp"
#include "riffle/permutation.hpp"
#include "riffle/exact.hpp"
#include "riffle/asymptotics.hpp"
#include "riffle/simulate.hpp"
#include "riffle/serialize.hpp"
