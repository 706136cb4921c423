#include "interp.hpp"

#include "fpif/core.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>

#include <memory>

namespace fpif::detail {

namespace {

struct InterpDeleter {
    void operator()(gsl_interp* p) const noexcept { gsl_interp_free(p); }
};
struct AccelDeleter {
    void operator()(gsl_interp_accel* p) const noexcept { gsl_interp_accel_free(p); }
};

}  // namespace

std::vector<double> spline_on_grid(std::span<const double> xs, std::span<const double> ys, std::size_t first,
                                   std::size_t last)
{
    if (xs.size() != ys.size() || xs.empty()) {
        throw InvalidArgument("spline: knot arrays must be non-empty and equally long");
    }
    std::vector<double> out(last - first);
    if (xs.size() == 1) {
        std::fill(out.begin(), out.end(), ys[0]);
        return out;
    }
    const gsl_interp_type* type = xs.size() >= 3 ? gsl_interp_cspline : gsl_interp_linear;
    std::unique_ptr<gsl_interp, InterpDeleter> interp(gsl_interp_alloc(type, xs.size()));
    std::unique_ptr<gsl_interp_accel, AccelDeleter> accel(gsl_interp_accel_alloc());
    if (gsl_interp_init(interp.get(), xs.data(), ys.data(), xs.size()) != GSL_SUCCESS) {
        throw InvalidArgument("spline: knots must be strictly increasing");
    }
    for (std::size_t i = first; i < last; ++i) {
        const double x = static_cast<double>(i);
        double v;
        if (x <= xs.front()) {
            v = ys.front();
        } else if (x >= xs.back()) {
            v = ys.back();
        } else {
            v = gsl_interp_eval(interp.get(), xs.data(), ys.data(), x, accel.get());
        }
        out[i - first] = v;
    }
    return out;
}

}  // namespace fpif::detail
