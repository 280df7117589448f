#include "clf/log_scalar.hpp"

#include "clf/errors.hpp"

namespace clf {

namespace {

void neumaier_add(double& sum, double& comp, double x)
{
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
        comp += (sum - t) + x;
    else
        comp += (x - t) + sum;
    sum = t;
}

} // namespace

LogScalar LogScalar::from_log(double ln_mag, int sign)
{
    if (std::isnan(ln_mag))
        throw DomainError("LogScalar: NaN log-magnitude");
    if (sign == 0 || ln_mag == -std::numeric_limits<double>::infinity())
        return {};
    return {sign > 0 ? 1 : -1, ln_mag};
}

LogScalar LogScalar::from_double(double value)
{
    if (std::isnan(value))
        throw DomainError("LogScalar: NaN value");
    if (value == 0.0)
        return {};
    return {value > 0 ? 1 : -1, std::log(std::abs(value))};
}

double LogScalar::to_double() const
{
    if (sign_ == 0)
        return 0.0;
    return sign_ * std::exp(ln_mag_);
}

LogScalar LogScalar::operator-() const
{
    return {-sign_, ln_mag_};
}

LogScalar& LogScalar::operator+=(const LogScalar& rhs)
{
    if (rhs.sign_ == 0)
        return *this;
    if (sign_ == 0) {
        *this = rhs;
        return *this;
    }
    const bool this_larger = ln_mag_ >= rhs.ln_mag_;
    const LogScalar& big = this_larger ? *this : rhs;
    const LogScalar& small = this_larger ? rhs : *this;
    const double diff = small.ln_mag_ - big.ln_mag_;
    if (big.sign_ == small.sign_) {
        *this = {big.sign_, big.ln_mag_ + std::log1p(std::exp(diff))};
        return *this;
    }
    if (diff == 0.0) {
        *this = {};
        return *this;
    }
    *this = {big.sign_, big.ln_mag_ + std::log1p(-std::exp(diff))};
    return *this;
}

LogScalar& LogScalar::operator*=(const LogScalar& rhs)
{
    if (sign_ == 0 || rhs.sign_ == 0) {
        *this = {};
        return *this;
    }
    sign_ *= rhs.sign_;
    ln_mag_ += rhs.ln_mag_;
    return *this;
}

LogScalar& LogScalar::operator/=(const LogScalar& rhs)
{
    if (rhs.sign_ == 0)
        throw DomainError("LogScalar: division by zero");
    if (sign_ == 0)
        return *this;
    sign_ *= rhs.sign_;
    ln_mag_ -= rhs.ln_mag_;
    return *this;
}

std::partial_ordering operator<=>(const LogScalar& a, const LogScalar& b)
{
    if (a.sign_ != b.sign_)
        return a.sign_ <=> b.sign_;
    if (a.sign_ == 0)
        return std::partial_ordering::equivalent;
    if (a.sign_ > 0)
        return a.ln_mag_ <=> b.ln_mag_;
    return b.ln_mag_ <=> a.ln_mag_;
}

LogScalar pow(const LogScalar& x, double p)
{
    if (!(p > 0.0))
        throw DomainError("LogScalar pow: exponent must be positive");
    if (x.is_zero())
        return LogScalar::zero();
    return LogScalar::from_log(p * x.ln_mag());
}

double log_add_exp(double a, double b)
{
    if (a < b)
        std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    return a + std::log1p(std::exp(b - a));
}

void LogSumExp::add(double ln_term)
{
    if (std::isnan(ln_term))
        throw NonFiniteError("LogSumExp: NaN term");
    if (ln_term == -std::numeric_limits<double>::infinity())
        return;
    if (ln_term == std::numeric_limits<double>::infinity())
        throw NonFiniteError("LogSumExp: infinite term");
    ++count_;
    if (ln_term > max_) {
        const double scale = std::exp(max_ - ln_term);
        sum_ *= scale;
        comp_ *= scale;
        max_ = ln_term;
        neumaier_add(sum_, comp_, 1.0);
        return;
    }
    neumaier_add(sum_, comp_, std::exp(ln_term - max_));
}

void LogSumExp::add(const LogScalar& term)
{
    if (term.sign() < 0)
        throw DomainError("LogSumExp: negative term");
    add(term.ln_mag());
}

double LogSumExp::ln_value() const
{
    if (count_ == 0)
        return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_ + comp_);
}

LogScalar LogSumExp::value() const
{
    return LogScalar::from_log(ln_value());
}

} // namespace clf
