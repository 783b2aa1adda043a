#ifndef OE_EXTREAL_HPP
#define OE_EXTREAL_HPP

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace oe {

// Extended real: a finite value or an explicit +/- infinity tag. Relative
// entropies and observational entropies are infinite in semantically
// meaningful ways, so infinities are carried as tagged values rather than
// floating-point sentinels.
class ExtReal {
public:
    ExtReal() : v_(0.0), tag_(Tag::Finite) {}
    ExtReal(double v) : v_(v), tag_(Tag::Finite) {
        if (std::isinf(v)) tag_ = v > 0 ? Tag::PosInf : Tag::NegInf;
        if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN");
    }

    static ExtReal pos_inf() { return ExtReal(Tag::PosInf); }
    static ExtReal neg_inf() { return ExtReal(Tag::NegInf); }

    bool finite() const { return tag_ == Tag::Finite; }
    bool is_pos_inf() const { return tag_ == Tag::PosInf; }
    bool is_neg_inf() const { return tag_ == Tag::NegInf; }

    // value of a finite ExtReal; throws on infinities
    double value() const {
        if (!finite()) throw std::logic_error("ExtReal: value() on infinite");
        return v_;
    }

    // finite value or +/-HUGE_VAL, for display and comparisons
    double as_double() const {
        if (tag_ == Tag::PosInf) return HUGE_VAL;
        if (tag_ == Tag::NegInf) return -HUGE_VAL;
        return v_;
    }

    std::string str() const {
        if (tag_ == Tag::PosInf) return "inf";
        if (tag_ == Tag::NegInf) return "-inf";
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v_);
        return buf;
    }

    friend ExtReal operator-(const ExtReal& a, const ExtReal& b) {
        if (a.finite() && b.finite()) return ExtReal(a.v_ - b.v_);
        if (a.finite() && b.is_pos_inf()) return neg_inf();
        if (a.finite() && b.is_neg_inf()) return pos_inf();
        if (b.finite()) return a;
        throw std::logic_error("ExtReal: inf - inf");
    }

    friend bool operator<(const ExtReal& a, const ExtReal& b) { return a.as_double() < b.as_double(); }
    friend bool operator<=(const ExtReal& a, const ExtReal& b) { return a.as_double() <= b.as_double(); }

    friend std::ostream& operator<<(std::ostream& os, const ExtReal& x) { return os << x.str(); }

private:
    enum class Tag { Finite, PosInf, NegInf };
    explicit ExtReal(Tag t) : v_(0.0), tag_(t) {}
    double v_;
    Tag tag_;
};

} // namespace oe

#endif
