#pragma once

#include <filesystem>
#include <string>

#include "ans/field.hpp"

namespace ans {

/// Binary snapshot format "ANSF": magic `ANSF`, u32 version, u32 n1 n2 n3,
/// f64 L1 L2 L3, then (re, im) f64 pairs with m3 running fastest, then m2,
/// then m1, each m from -n/2 to n/2-1, all little-endian.
inline constexpr std::uint32_t ansf_version = 1;

void write_ansf(const SpectralField& f, const std::filesystem::path& path);
SpectralField read_ansf(const std::filesystem::path& path);

/// Vector fields are stored as three scalar snapshots `<base>.c1.ansf`,
/// `<base>.c2.ansf`, `<base>.c3.ansf`.
void write_ansf(const VectorField& v, const std::filesystem::path& base);
VectorField read_ansf_vector(const std::filesystem::path& base);

}  // namespace ans
