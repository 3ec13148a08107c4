#pragma once

// Named functions used as fixtures and as seeds for APN sampling.

#include <vector>

#include "eaforge/vbf.hpp"

namespace eaforge {

// The 13 six-bit quadratic APN representatives (modulus 0x5B), in the
// conventional order.
std::vector<Vbf> banff_functions();

// x^3 + x^10 + a x^24 over GF(2^6) mod 0x5B.
Vbf kim_mapping();

// x^(2^i + 1) over GF(2^n) with the default modulus for n.
Vbf gold_function(unsigned n, unsigned i);

}  // namespace eaforge
