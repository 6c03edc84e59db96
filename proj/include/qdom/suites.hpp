#pragma once

#include "qdom/report.hpp"

#include <cstdint>

namespace qdom::suites {

// Algebra laws on the canonical carriers: the rational unit interval and
// finite tables (exact), qubit effects and qubit+scalar effects (tolerance),
// homomorphism examples, downsets, plus negative controls that must be
// caught with witnesses.
Report effect_algebra_suite(std::uint64_t seed, double tol, std::size_t samples = 64);

// Subdistribution monad laws, iso round-trip, wp bijection and duality,
// and the homming-into-[0,1] adjunction, all exact.
Report discrete_suite(std::uint64_t seed, std::size_t instances = 200);

// Finite-poset sweeps: way-below collapse, chain-complete vs directed-
// complete, and dcpo-ness of monotone-function posets, exhaustively up to
// max_elements (subset enumeration caps apply).
Report order_core_suite(std::size_t max_elements = 4);

}  // namespace qdom::suites
