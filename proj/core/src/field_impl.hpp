#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qdiff/errors.hpp"
#include "qdiff/field.hpp"
#include "qdiff/tridiag.hpp"

namespace qdiff::detail {

inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

class FieldImpl {
public:
    virtual ~FieldImpl() = default;
    virtual double value(double x) const = 0;
    virtual std::shared_ptr<const FieldImpl> derivative1() const = 0;
    virtual std::shared_ptr<const FieldImpl> derivative2() const {
        return derivative1()->derivative1();
    }
    virtual double period() const = 0;
    virtual std::string describe() const = 0;
};

using ImplPtr = std::shared_ptr<const FieldImpl>;

/// Reduce x into [0, L).
inline double wrap(double x, double L) {
    double y = std::fmod(x, L);
    return y < 0 ? y + L : y;
}

class ConstantImpl final : public FieldImpl {
public:
    ConstantImpl(double c, double L) : c_(c), L_(L) {}
    double value(double) const override { return c_; }
    ImplPtr derivative1() const override {
        return std::make_shared<ConstantImpl>(0.0, L_);
    }
    ImplPtr derivative2() const override { return derivative1(); }
    double period() const override { return L_; }
    std::string describe() const override { return "const:" + fmt_num(c_); }
    double constant_value() const { return c_; }

private:
    double c_, L_;
};

/// c0 + c1 cos(w (x + phase)) + s1 sin(w (x + phase)), w = 2 pi / L.
/// cos^2(pi (x + phase) / L) lives here as 1/2 + cos(2 pi (x+phase)/L)/2.
class HarmonicImpl final : public FieldImpl {
public:
    HarmonicImpl(double c0, double c1, double s1, double phase, double L,
                 std::string label = {})
        : c0_(c0), c1_(c1), s1_(s1), phase_(phase), L_(L),
          label_(std::move(label)) {}

    double value(double x) const override {
        const double a = 2.0 * M_PI * (x + phase_) / L_;
        return c0_ + c1_ * std::cos(a) + s1_ * std::sin(a);
    }
    ImplPtr derivative1() const override {
        const double w = 2.0 * M_PI / L_;
        return std::make_shared<HarmonicImpl>(0.0, s1_ * w, -c1_ * w, phase_,
                                              L_);
    }
    ImplPtr derivative2() const override {
        const double w2 = std::pow(2.0 * M_PI / L_, 2);
        return std::make_shared<HarmonicImpl>(0.0, -c1_ * w2, -s1_ * w2,
                                              phase_, L_);
    }
    double period() const override { return L_; }
    std::string describe() const override {
        if (!label_.empty()) return label_;
        return "harmonic:" + fmt_num(c0_) + "," + fmt_num(c1_) + "," +
               fmt_num(s1_) + "," + fmt_num(phase_);
    }

private:
    double c0_, c1_, s1_, phase_, L_;
    std::string label_;
};

/// Periodic natural cubic spline on m uniformly spaced knots. Stores the
/// second-derivative knot values from the cyclic tridiagonal system.
struct UniformPeriodicSpline {
    std::vector<double> y;   // knot values, y[i] at x = i h
    std::vector<double> M;   // second derivatives at knots
    double L = 1.0;
    double h = 1.0;

    UniformPeriodicSpline(std::vector<double> values, double period)
        : y(std::move(values)), L(period) {
        const int m = static_cast<int>(y.size());
        if (m < 3) throw DomainError("periodic spline needs >= 3 knots");
        h = L / m;
        std::vector<double> sub(m, h / 6.0), diag(m, 2.0 * h / 3.0),
            sup(m, h / 6.0), rhs(m);
        for (int i = 0; i < m; ++i) {
            const double ym = y[(i + m - 1) % m], yp = y[(i + 1) % m];
            rhs[i] = (yp - 2.0 * y[i] + ym) / h;
        }
        M = solve_cyclic_tridiagonal(sub, diag, sup, rhs);
    }

    int knots() const { return static_cast<int>(y.size()); }

    void locate(double x, int& j, int& j1, double& t) const {
        const double xr = wrap(x, L);
        j = static_cast<int>(xr / h);
        if (j >= knots()) j = knots() - 1;
        t = xr - j * h;
        j1 = (j + 1) % knots();
    }

    double eval(double x) const {
        int j, j1;
        double t;
        locate(x, j, j1, t);
        const double u = h - t;
        return M[j] * u * u * u / (6.0 * h) + M[j1] * t * t * t / (6.0 * h) +
               (y[j] / h - M[j] * h / 6.0) * u +
               (y[j1] / h - M[j1] * h / 6.0) * t;
    }
    double eval_d1(double x) const {
        int j, j1;
        double t;
        locate(x, j, j1, t);
        const double u = h - t;
        return -M[j] * u * u / (2.0 * h) + M[j1] * t * t / (2.0 * h) +
               (y[j1] - y[j]) / h - (M[j1] - M[j]) * h / 6.0;
    }
    double eval_d2(double x) const {
        int j, j1;
        double t;
        locate(x, j, j1, t);
        return M[j] * (h - t) / h + M[j1] * t / h;
    }
    double eval_d3(double x) const {
        int j, j1;
        double t;
        locate(x, j, j1, t);
        return (M[j1] - M[j]) / h;
    }
};

class SplineDerivImpl;

class SplineImpl final : public FieldImpl {
public:
    SplineImpl(std::vector<double> values, double L, std::string label = {})
        : s_(std::make_shared<UniformPeriodicSpline>(std::move(values), L)),
          label_(std::move(label)) {}

    double value(double x) const override { return s_->eval(x); }
    ImplPtr derivative1() const override;
    ImplPtr derivative2() const override;
    double period() const override { return s_->L; }
    std::string describe() const override {
        if (!label_.empty()) return label_;
        std::string out = "spline:";
        for (std::size_t i = 0; i < s_->y.size(); ++i) {
            if (i) out += ",";
            out += fmt_num(s_->y[i]);
        }
        return out;
    }
    const UniformPeriodicSpline& spline() const { return *s_; }

private:
    std::shared_ptr<const UniformPeriodicSpline> s_;
    std::string label_;
};

class SplineDerivImpl final : public FieldImpl {
public:
    SplineDerivImpl(std::shared_ptr<const UniformPeriodicSpline> s, int order)
        : s_(std::move(s)), order_(order) {}
    double value(double x) const override {
        switch (order_) {
            case 1: return s_->eval_d1(x);
            case 2: return s_->eval_d2(x);
            default: return s_->eval_d3(x);
        }
    }
    ImplPtr derivative1() const override {
        if (order_ >= 3)
            throw DomainError("spline derivative order beyond 3 unsupported");
        return std::make_shared<SplineDerivImpl>(s_, order_ + 1);
    }
    double period() const override { return s_->L; }
    std::string describe() const override {
        return "spline_d" + std::to_string(order_);
    }

private:
    std::shared_ptr<const UniformPeriodicSpline> s_;
    int order_;
};

inline ImplPtr SplineImpl::derivative1() const {
    return std::make_shared<SplineDerivImpl>(s_, 1);
}
inline ImplPtr SplineImpl::derivative2() const {
    return std::make_shared<SplineDerivImpl>(s_, 2);
}

/// Values on a uniform grid; evaluation by periodic cubic spline through the
/// samples, derivatives by 4th-order periodic stencils (producing another
/// sampled field).
class SampledImpl final : public FieldImpl {
public:
    SampledImpl(std::vector<double> values, double L)
        : s_(std::make_shared<UniformPeriodicSpline>(values, L)) {}

    double value(double x) const override { return s_->eval(x); }
    ImplPtr derivative1() const override {
        return std::make_shared<SampledImpl>(stencil(1), s_->L);
    }
    ImplPtr derivative2() const override {
        return std::make_shared<SampledImpl>(stencil(2), s_->L);
    }
    double period() const override { return s_->L; }
    std::string describe() const override {
        return "sampled:n=" + std::to_string(s_->knots());
    }
    const std::vector<double>& values() const { return s_->y; }

private:
    std::vector<double> stencil(int order) const {
        const auto& v = s_->y;
        const int n = static_cast<int>(v.size());
        if (n < 8)
            throw DomainError("sampled-field derivative needs >= 8 points");
        const double h = s_->h;
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) {
            const double vm2 = v[(i + n - 2) % n], vm1 = v[(i + n - 1) % n];
            const double vp1 = v[(i + 1) % n], vp2 = v[(i + 2) % n];
            if (order == 1)
                out[i] = (-vp2 + 8.0 * vp1 - 8.0 * vm1 + vm2) / (12.0 * h);
            else
                out[i] = (-vp2 + 16.0 * vp1 - 30.0 * v[i] + 16.0 * vm1 - vm2) /
                         (12.0 * h * h);
        }
        return out;
    }

    std::shared_ptr<const UniformPeriodicSpline> s_;
};

class LambdaImpl final : public FieldImpl {
public:
    using Fn = std::function<double(double)>;
    LambdaImpl(Fn f, Fn d1, Fn d2, double L)
        : f_(std::move(f)), d1_(std::move(d1)), d2_(std::move(d2)), L_(L) {}

    double value(double x) const override { return f_(x); }
    ImplPtr derivative1() const override {
        if (!d1_) throw DomainError("field has no derivative");
        return std::make_shared<LambdaImpl>(d1_, d2_, Fn{}, L_);
    }
    ImplPtr derivative2() const override {
        if (!d2_) throw DomainError("field has no second derivative");
        return std::make_shared<LambdaImpl>(d2_, Fn{}, Fn{}, L_);
    }
    double period() const override { return L_; }
    std::string describe() const override { return "custom"; }

private:
    Fn f_, d1_, d2_;
    double L_;
};

class ShiftImpl final : public FieldImpl {
public:
    ShiftImpl(ImplPtr base, double omega) : base_(std::move(base)), omega_(omega) {}
    double value(double x) const override { return base_->value(x + omega_); }
    ImplPtr derivative1() const override {
        return std::make_shared<ShiftImpl>(base_->derivative1(), omega_);
    }
    ImplPtr derivative2() const override {
        return std::make_shared<ShiftImpl>(base_->derivative2(), omega_);
    }
    double period() const override { return base_->period(); }
    std::string describe() const override {
        return "shift(" + base_->describe() + "," + fmt_num(omega_) + ")";
    }

private:
    ImplPtr base_;
    double omega_;
};

enum class BinOp { add, sub, mul, div };

class CompositeImpl final : public FieldImpl {
public:
    CompositeImpl(BinOp op, ImplPtr a, ImplPtr b)
        : op_(op), a_(std::move(a)), b_(std::move(b)) {
        if (std::abs(a_->period() - b_->period()) >
            1e-12 * std::abs(a_->period()))
            throw DomainError("composite field: period mismatch");
    }

    double value(double x) const override {
        const double u = a_->value(x), v = b_->value(x);
        switch (op_) {
            case BinOp::add: return u + v;
            case BinOp::sub: return u - v;
            case BinOp::mul: return u * v;
            default: return u / v;
        }
    }
    ImplPtr derivative1() const override;
    double period() const override { return a_->period(); }
    std::string describe() const override {
        static const char* sym[] = {"+", "-", "*", "/"};
        return "(" + a_->describe() + sym[static_cast<int>(op_)] +
               b_->describe() + ")";
    }

private:
    BinOp op_;
    ImplPtr a_, b_;
};

/// alpha * f + beta
class AffineImpl final : public FieldImpl {
public:
    AffineImpl(double alpha, ImplPtr f, double beta)
        : alpha_(alpha), f_(std::move(f)), beta_(beta) {}
    double value(double x) const override {
        return alpha_ * f_->value(x) + beta_;
    }
    ImplPtr derivative1() const override {
        return std::make_shared<AffineImpl>(alpha_, f_->derivative1(), 0.0);
    }
    ImplPtr derivative2() const override {
        return std::make_shared<AffineImpl>(alpha_, f_->derivative2(), 0.0);
    }
    double period() const override { return f_->period(); }
    std::string describe() const override {
        return fmt_num(alpha_) + "*" + f_->describe() + "+" + fmt_num(beta_);
    }

private:
    double alpha_;
    ImplPtr f_;
    double beta_;
};

inline ImplPtr CompositeImpl::derivative1() const {
    const auto da = a_->derivative1();
    const auto db = b_->derivative1();
    switch (op_) {
        case BinOp::add:
            return std::make_shared<CompositeImpl>(BinOp::add, da, db);
        case BinOp::sub:
            return std::make_shared<CompositeImpl>(BinOp::sub, da, db);
        case BinOp::mul: {
            auto t1 = std::make_shared<CompositeImpl>(BinOp::mul, da, b_);
            auto t2 = std::make_shared<CompositeImpl>(BinOp::mul, a_, db);
            return std::make_shared<CompositeImpl>(BinOp::add, t1, t2);
        }
        default: {  // (a/b)' = (a' b - a b') / b^2
            auto num1 = std::make_shared<CompositeImpl>(BinOp::mul, da, b_);
            auto num2 = std::make_shared<CompositeImpl>(BinOp::mul, a_, db);
            auto num =
                std::make_shared<CompositeImpl>(BinOp::sub, num1, num2);
            auto b2 = std::make_shared<CompositeImpl>(BinOp::mul, b_, b_);
            return std::make_shared<CompositeImpl>(BinOp::div, num, b2);
        }
    }
}

}  // namespace qdiff::detail
