#include "hetvol/variance_models.hpp"

#include "hetvol/errors.hpp"

#include <boost/math/distributions/fisher_f.hpp>

#include <algorithm>
#include <stdexcept>

namespace hetvol {

AnovaResult anova_nested(const AdditiveFit& full, const AdditiveFit& reduced, std::size_t n) {
    if (full.n() != n || reduced.n() != n) {
        throw std::invalid_argument("anova_nested: fits must share the same n observations");
    }
    AnovaResult out;
    out.df_num = full.total_edf - reduced.total_edf;
    out.df_den = static_cast<double>(n) - full.total_edf;
    if (!(out.df_den > 0.0)) {
        throw FitError("anova_nested: full model uses all residual degrees of freedom");
    }
    const double gain = reduced.rss - full.rss;
    if (!(gain > 0.0)) {
        out.f_stat = 0.0;
        out.p_value = 1.0;
        return out;
    }
    if (!(out.df_num > 0.0)) {
        throw FitError("anova_nested: full model edf (" + std::to_string(full.total_edf) +
                       ") does not exceed reduced model edf (" +
                       std::to_string(reduced.total_edf) + ")");
    }
    out.f_stat = (gain / out.df_num) / (full.rss / out.df_den);
    const boost::math::fisher_f dist(out.df_num, out.df_den);
    out.p_value = std::clamp(boost::math::cdf(boost::math::complement(dist, out.f_stat)), 0.0, 1.0);
    return out;
}

}  // namespace hetvol
