#pragma once

#include <cmath>
#include <compare>
#include <limits>

namespace clf {

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Used for the weights of the test function, for modular values and for
/// Luxemburg norms, which routinely leave the range of `double`. Zero is
/// represented by sign 0; its `ln_mag()` is -inf.
class LogScalar {
public:
    constexpr LogScalar() = default;

    static LogScalar from_log(double ln_mag, int sign = 1);
    static LogScalar from_double(double value);
    static constexpr LogScalar zero() { return {}; }
    static LogScalar one() { return from_log(0.0); }

    int sign() const { return sign_; }
    double ln_mag() const
    {
        return sign_ == 0 ? -std::numeric_limits<double>::infinity() : ln_mag_;
    }
    bool is_zero() const { return sign_ == 0; }

    /// Converts back to `double`; overflows to +-inf and underflows to 0.
    double to_double() const;

    LogScalar operator-() const;
    LogScalar& operator+=(const LogScalar& rhs);
    LogScalar& operator-=(const LogScalar& rhs) { return *this += -rhs; }
    LogScalar& operator*=(const LogScalar& rhs);
    LogScalar& operator/=(const LogScalar& rhs);

    friend LogScalar operator+(LogScalar a, const LogScalar& b) { return a += b; }
    friend LogScalar operator-(LogScalar a, const LogScalar& b) { return a -= b; }
    friend LogScalar operator*(LogScalar a, const LogScalar& b) { return a *= b; }
    friend LogScalar operator/(LogScalar a, const LogScalar& b) { return a /= b; }

    friend std::partial_ordering operator<=>(const LogScalar& a, const LogScalar& b);
    friend bool operator==(const LogScalar& a, const LogScalar& b)
    {
        return (a <=> b) == std::partial_ordering::equivalent;
    }

private:
    constexpr LogScalar(int sign, double ln_mag) : sign_(sign), ln_mag_(ln_mag) {}

    int sign_ = 0;
    double ln_mag_ = 0.0;
};

/// |x|^p for a positive exponent; the sign of a negative base is dropped.
LogScalar pow(const LogScalar& x, double p);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

/// Streaming log-sum-exp over a sequence of natural-log magnitudes.
///
/// Terms are added in call order. The running sum is kept relative to the
/// current maximum with Neumaier compensation, so the result depends only on
/// the order of `add` calls.
class LogSumExp {
public:
    void add(double ln_term);
    void add(const LogScalar& term);

    /// log of the accumulated sum; -inf when empty.
    double ln_value() const;
    LogScalar value() const;
    bool empty() const { return count_ == 0; }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
    double comp_ = 0.0;
    long count_ = 0;
};

} // namespace clf
