#pragma once

#include <stdexcept>
#include <string>

namespace ffmor {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularShift : Error {
    using Error::Error;
};
struct NotStable : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct NotPsd : Error {
    using Error::Error;
};
struct DegenerateSpectrum : Error {
    using Error::Error;
};

struct NotAdmissible : Error {
    double rho;
    double rho_star;
    NotAdmissible(const std::string& msg, double rho_, double rho_star_)
        : Error(msg), rho(rho_), rho_star(rho_star_) {}
};

struct SingularInversion : Error {
    using Error::Error;
};
struct RoundTripFailure : Error {
    using Error::Error;
};
struct BadOrder : Error {
    using Error::Error;
};
struct SingularResidualization : Error {
    using Error::Error;
};
struct NoAdmissiblePoint : Error {
    using Error::Error;
};

struct NotAchievable : Error {
    double best_bound;  // bound at r = n-1
    NotAchievable(const std::string& msg, double best)
        : Error(msg), best_bound(best) {}
};

struct ParseError : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace ffmor
