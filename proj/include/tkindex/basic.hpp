#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tkindex {

using Int = long long;
using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

// Exact rational number on 64-bit integers, always normalized
// (gcd(num,den)=1, den>0). Desk-scale inputs keep magnitudes tiny.
struct Rat {
    Int num = 0;
    Int den = 1;

    Rat() = default;
    Rat(Int n) : num(n), den(1) {}
    Rat(Int n, Int d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        Int g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    bool is_zero() const { return num == 0; }
    int sign() const { return num > 0 ? 1 : (num < 0 ? -1 : 0); }

    friend Rat operator+(const Rat& a, const Rat& b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator-(const Rat& a, const Rat& b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.num * b.num, a.den * b.den); }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num == 0) throw std::domain_error("rational division by zero");
        return Rat(a.num * b.den, a.den * b.num);
    }
    Rat operator-() const { Rat r; r.num = -num; r.den = den; return r; }
    Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
    Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
    Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return a.num * b.den < b.num * a.den; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    static Rat parse(const std::string& s);
};

using RatVec = std::vector<Rat>;

inline Rat dot(const RatVec& a, const IntVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Rat r;
    for (size_t i = 0; i < a.size(); ++i) r += a[i] * Rat(b[i]);
    return r;
}

inline Int dot(const IntVec& a, const IntVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Int r = 0;
    for (size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

inline bool is_zero_vec(const IntVec& v) {
    for (Int x : v) if (x != 0) return false;
    return true;
}

// -------- error taxonomy (stable machine codes for the CLI) --------

struct TkError : std::runtime_error {
    std::string code;
    TkError(std::string c, const std::string& msg) : std::runtime_error(msg), code(std::move(c)) {}
};

struct SchemaError : TkError {
    explicit SchemaError(const std::string& msg) : TkError("schema", msg) {}
};
struct InvariantError : TkError {
    explicit InvariantError(const std::string& msg) : TkError("invariant", msg) {}
};
struct ZeroDifferentialError : TkError {
    explicit ZeroDifferentialError(const std::string& msg) : TkError("zero-differential", msg) {}
};
struct BlockMismatchError : TkError {
    explicit BlockMismatchError(const std::string& msg) : TkError("block-mismatch", msg) {}
};
struct NoAdmissibleGammaError : TkError {
    explicit NoAdmissibleGammaError(const std::string& msg) : TkError("no-admissible-gamma", msg) {}
};
struct NotPolarizableError : TkError {
    explicit NotPolarizableError(const std::string& msg) : TkError("not-polarizable", msg) {}
};
struct NotSummableError : TkError {
    explicit NotSummableError(const std::string& msg) : TkError("not-summable", msg) {}
};
struct NotSubmoduleError : TkError {
    explicit NotSubmoduleError(const std::string& msg) : TkError("not-submodule", msg) {}
};
struct NotPeriodicError : TkError {
    explicit NotPeriodicError(const std::string& msg) : TkError("not-periodic", msg) {}
};
struct ReconstructionUnsupportedError : TkError {
    explicit ReconstructionUnsupportedError(const std::string& msg) : TkError("reconstruction-unsupported", msg) {}
};
struct GammaNotAdmissibleError : TkError {
    explicit GammaNotAdmissibleError(const std::string& msg) : TkError("gamma-not-admissible", msg) {}
};

}  // namespace tkindex
