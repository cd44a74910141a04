#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace frontlab {

// ---------------------------------------------------------------------------
// Error taxonomy. Domain failures (solver blow-up, non-convergence) are
// distinct from caller mistakes (bad arguments, unknown names) so the CLI can
// map them to different exit codes.
// ---------------------------------------------------------------------------
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct ArgumentError : Error {
    using Error::Error;
};
struct UnsupportedError : Error {
    using Error::Error;
};
struct SolverError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Small fixed-size linear algebra. Value types, no dependencies.
// ---------------------------------------------------------------------------
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
};
inline Vec2 operator*(double s, Vec2 v) { return v * s; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

struct Mat2 {
    // row-major: [a b; c d]
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double det() const { return a * d - b * c; }
    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
};

// Wrap a coordinate into [0,1).
inline double wrap01(double x) {
    double w = x - std::floor(x);
    return (w >= 1.0) ? 0.0 : w;  // guard against floor rounding at 1.0
}

inline Vec2 wrap01(Vec2 v) { return {wrap01(v.x), wrap01(v.y)}; }

// ---------------------------------------------------------------------------
// splitmix64: the documented pseudo-random generator for all seeded
// ensembles. State advances by the golden-gamma increment; output is the
// usual 64-bit finalizer. Deterministic across platforms.
// ---------------------------------------------------------------------------
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53-bit resolution
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller (two uniforms per pair, cached)
    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
        double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(6.283185307179586476925286766559 * u2);
        have_cached_ = true;
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

  private:
    double cached_ = 0.0;
    bool have_cached_ = false;
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace frontlab
