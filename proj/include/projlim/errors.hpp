#pragma once

#include <stdexcept>
#include <string>

namespace projlim {

// Error taxonomy shared by all modules. Every throw site uses one of these so
// the CLI can map failures to exit codes without string matching.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An index pair/triple was passed out of order (lo not below hi).
struct ordering_error : error {
  using error::error;
};

// A value lies outside the domain of the operation (not a bijection, not on
// the simplex, size mismatch, ...).
struct domain_error : error {
  using error::error;
};

// The request exceeds the hard-coded desk-scale limits.
struct capability_error : error {
  using error::error;
};

// A numeric routine failed (non-finite value, diverging integral, singular
// factorization).
struct numeric_error : error {
  using error::error;
};

// Hyperparameters outside the declared hull; the prior does not normalize.
struct improper_prior_error : error {
  using error::error;
};

// Invalid experiment configuration (bad keys, bad sizes, bad flags).
struct config_error : error {
  using error::error;
};

}  // namespace projlim
