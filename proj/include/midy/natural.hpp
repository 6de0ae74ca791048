#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace midy {

// The universal scalar: an arbitrary-precision non-negative integer.
// cpp_int stores a canonical sign/magnitude form, so == is value equality.
// All operations in this library keep their results non-negative.
using Natural = boost::multiprecision::cpp_int;

inline bool fits_u64(const Natural& x) {
    return x >= 0 && x <= std::numeric_limits<std::uint64_t>::max();
}

inline std::uint64_t as_u64(const Natural& x) {
    return x.convert_to<std::uint64_t>();
}

inline std::string to_decimal(const Natural& x) { return x.str(); }

/// Strict decimal parse (digits only, no sign). Throws DomainError.
Natural parse_natural(std::string_view text);

// 64-bit modular primitives used as fast paths throughout.
inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t addmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) + b) % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

}  // namespace midy
