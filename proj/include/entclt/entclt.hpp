#pragma once

// Umbrella header: exact lattice-pmf arithmetic, entropy and relative-entropy
// functionals against quantised Gaussian references, binomial closed forms,
// the Bernoulli part decomposition, Gaussian-smoothed Fisher information, and
// the scan/verify drivers built on top of them.

#include "entclt/bernoulli_part.hpp"
#include "entclt/binomial.hpp"
#include "entclt/bound_report.hpp"
#include "entclt/entropy.hpp"
#include "entclt/fft.hpp"
#include "entclt/fisher.hpp"
#include "entclt/lattice_pmf.hpp"
#include "entclt/normal.hpp"
#include "entclt/numeric.hpp"
#include "entclt/quadrature.hpp"
#include "entclt/scan.hpp"
