#pragma once

#include <stdexcept>
#include <string>

namespace dcma {

// Invalid or inconsistent configuration (bad SystemParams, malformed JSON, ...).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Two spectra/waveforms do not live on the same frequency grid.
class grid_mismatch_error : public std::runtime_error {
public:
    explicit grid_mismatch_error(const std::string& what) : std::runtime_error(what) {}
};

// A simulated signal would not fit the FFT time window (circular aliasing).
class window_overflow_error : public std::runtime_error {
public:
    explicit window_overflow_error(const std::string& what) : std::runtime_error(what) {}
};

// A statistical result cannot be produced at the requested resolution.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dcma
