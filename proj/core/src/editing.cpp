#include "latentlens/editing.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "latentlens/error.hpp"

namespace latentlens::editing {

double AttributeBoundary::score(const StyleCode& code) const {
  require_same_layout(code.layout(), layout, "boundary score");
  double s = offset;
  const auto x = code.flat();
  for (std::size_t c = 0; c < x.size(); ++c) {
    s += normal[c] * x[c];
  }
  return s;
}

namespace {

double sigmoid(double x) noexcept {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) noexcept { return std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0); }

/// Standardised codes of one class plus the class label.
struct ClassBlock {
  PointMatrix z;
  double label = 1.0;
};

struct Model {
  std::vector<double> w;
  double b = 0.0;
};

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

/// Accumulates sum_i coeff(f_i) * [z_i, 1] over one class, where f_i is the
/// model score; returns the summed loss alongside.
template <typename Coefficient>
double accumulate(const ClassBlock& block, const Model& model, std::vector<double>& grad_w, double& grad_b,
                  Coefficient coeff) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < block.z.rows(); ++i) {
    const auto z = block.z.row(i);
    const double f = dot(model.w, z) + model.b;
    const double margin = block.label * f;
    loss += softplus(-margin);
    const double g = coeff(margin);
    for (std::size_t c = 0; c < z.size(); ++c) {
      grad_w[c] += g * z[c];
    }
    grad_b += g;
  }
  return loss;
}

/// Largest eigenvalue of (1/n) [Z 1]^T [Z 1] by power iteration.
double gram_spectral_radius(const ClassBlock& pos, const ClassBlock& neg, std::size_t dim) {
  const double n = static_cast<double>(pos.z.rows() + neg.z.rows());
  std::vector<double> v(dim, 1.0);
  double vb = 1.0;
  double norm = std::sqrt(static_cast<double>(dim) + 1.0);
  for (auto& x : v) {
    x /= norm;
  }
  vb /= norm;

  double lambda = 0.0;
  std::vector<double> acc_p(dim);
  std::vector<double> acc_n(dim);
  for (int iter = 0; iter < 60; ++iter) {
    double b_p = 0.0;
    double b_n = 0.0;
    const auto apply = [&](const ClassBlock& block, std::vector<double>& acc, double& acc_b) {
      std::fill(acc.begin(), acc.end(), 0.0);
      acc_b = 0.0;
      for (std::size_t i = 0; i < block.z.rows(); ++i) {
        const auto z = block.z.row(i);
        const double proj = dot(z, v) + vb;
        for (std::size_t c = 0; c < dim; ++c) {
          acc[c] += proj * z[c];
        }
        acc_b += proj;
      }
    };
    apply(pos, acc_p, b_p);
    apply(neg, acc_n, b_n);
    double sq = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      v[c] = (acc_p[c] + acc_n[c]) / n;
      sq += v[c] * v[c];
    }
    vb = (b_p + b_n) / n;
    sq += vb * vb;
    lambda = std::sqrt(sq);
    if (lambda == 0.0) {
      break;
    }
    for (auto& x : v) {
      x /= lambda;
    }
    vb /= lambda;
  }
  return lambda;
}

}  // namespace

AttributeBoundary fit_boundary(std::span<const StyleCode> positives, std::span<const StyleCode> negatives,
                               const BoundaryOptions& options) {
  if (positives.empty() || negatives.empty()) {
    throw InvalidArgument("boundary fit needs at least one positive and one negative code");
  }
  if (!(options.l2_reg >= 0.0) || !(options.tol >= 0.0)) {
    throw InvalidArgument("boundary fit needs l2_reg >= 0 and tol >= 0");
  }
  const Layout& layout = positives.front().layout();
  for (const auto& code : positives) {
    require_same_layout(code.layout(), layout, "boundary fit");
  }
  for (const auto& code : negatives) {
    require_same_layout(code.layout(), layout, "boundary fit");
  }
  const std::size_t dim = layout.total();
  const double n = static_cast<double>(positives.size() + negatives.size());

  // Centre on the pooled mean and divide by one pooled RMS scale. A
  // per-channel scale would amplify spurious weight on low-variance channels
  // once the normal is mapped back to archive coordinates.
  const auto column_sums = [&](std::span<const StyleCode> codes, const std::vector<double>* center) {
    std::vector<double> sums(dim, 0.0);
    for (const auto& code : codes) {
      const auto x = code.flat();
      for (std::size_t c = 0; c < dim; ++c) {
        const double v = center ? x[c] - (*center)[c] : x[c];
        sums[c] += center ? v * v : v;
      }
    }
    return sums;
  };
  std::vector<double> mean(dim);
  {
    const auto sp = column_sums(positives, nullptr);
    const auto sn = column_sums(negatives, nullptr);
    for (std::size_t c = 0; c < dim; ++c) {
      mean[c] = (sp[c] + sn[c]) / n;
    }
  }
  double scale = 1.0;
  {
    const auto qp = column_sums(positives, &mean);
    const auto qn = column_sums(negatives, &mean);
    double total = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      total += qp[c] + qn[c];
    }
    const double rms = std::sqrt(total / (n * static_cast<double>(dim)));
    scale = rms > 0.0 ? rms : 1.0;
  }
  const auto standardise = [&](std::span<const StyleCode> codes, double label) {
    ClassBlock block{PointMatrix(codes.size(), dim), label};
    for (std::size_t i = 0; i < codes.size(); ++i) {
      const auto x = codes[i].flat();
      auto z = block.z.row(i);
      for (std::size_t c = 0; c < dim; ++c) {
        z[c] = (x[c] - mean[c]) / scale;
      }
    }
    return block;
  };
  const ClassBlock pos = standardise(positives, 1.0);
  const ClassBlock neg = standardise(negatives, -1.0);

  const double lipschitz = 0.25 * 1.1 * gram_spectral_radius(pos, neg, dim) + options.l2_reg;
  const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  Model model{std::vector<double>(dim, 0.0), 0.0};
  std::vector<double> gw_p(dim);
  std::vector<double> gw_n(dim);
  std::vector<double> grad(dim);
  // d/df softplus(-y f) = -y * sigmoid(-y f).
  const auto coeff_pos = [](double margin) { return -sigmoid(-margin); };
  const auto coeff_neg = [](double margin) { return sigmoid(-margin); };

  FitDiagnostics diag;
  for (std::size_t iter = 0;; ++iter) {
    double gb_p = 0.0;
    double gb_n = 0.0;
    const double loss_p = accumulate(pos, model, gw_p, gb_p, coeff_pos);
    const double loss_n = accumulate(neg, model, gw_n, gb_n, coeff_neg);
    double sq = 0.0;
    double w_sq = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      grad[c] = (gw_p[c] + gw_n[c]) / n + options.l2_reg * model.w[c];
      sq += grad[c] * grad[c];
      w_sq += model.w[c] * model.w[c];
    }
    const double grad_b = (gb_p + gb_n) / n;
    diag.final_loss = (loss_p + loss_n) / n + 0.5 * options.l2_reg * w_sq;
    diag.gradient_norm = std::sqrt(sq + grad_b * grad_b);
    diag.iterations = iter;

    if (iter == 0 && std::sqrt(sq) <= 1e-10) {
      throw DegenerateFit("boundary fit: classes are indistinguishable (zero gradient at the origin)");
    }
    if (diag.gradient_norm <= options.tol) {
      diag.converged = true;
      break;
    }
    if (iter >= options.max_iter) {
      break;
    }
    for (std::size_t c = 0; c < dim; ++c) {
      model.w[c] -= step * grad[c];
    }
    model.b -= step * grad_b;
  }

  // Back to the archive's coordinates.
  std::vector<double> w_raw(dim);
  double b_raw = model.b;
  double norm2 = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    w_raw[c] = model.w[c] / scale;
    b_raw -= w_raw[c] * mean[c];
    norm2 += w_raw[c] * w_raw[c];
  }
  const double norm = std::sqrt(norm2);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DegenerateFit("boundary fit produced a zero normal");
  }

  AttributeBoundary out;
  out.attribute = options.attribute;
  out.space = options.space;
  out.layout = layout;
  out.normal.resize(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    out.normal[c] = w_raw[c] / norm;
  }
  out.offset = b_raw / norm;

  std::size_t correct = 0;
  for (const auto& code : positives) {
    correct += out.score(code) > 0.0 ? 1 : 0;
  }
  for (const auto& code : negatives) {
    correct += out.score(code) < 0.0 ? 1 : 0;
  }
  diag.train_accuracy = static_cast<double>(correct) / n;
  out.diagnostics = diag;
  return out;
}

AgePartition age_partition(std::span<const LatentRecord> records, double threshold_years) {
  AgePartition out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& age = records[i].age;
    if (!age) {
      throw InvalidArgument("record '" + records[i].id + "' has no age label");
    }
    (*age < threshold_years ? out.negatives : out.positives).push_back(i);
  }
  return out;
}

StyleCode linear_edit(const StyleCode& code, const AttributeBoundary& boundary, double alpha, const LayerMask& layers) {
  require_same_layout(code.layout(), boundary.layout, "linear edit");
  if (!std::isfinite(alpha)) {
    throw InvalidArgument("edit strength must be finite");
  }
  const Layout& layout = code.layout();
  if (!layers.empty() && layers.size() != layout.layer_count()) {
    throw InvalidArgument("layer mask must have one entry per layer");
  }
  std::vector<double> values(code.flat().begin(), code.flat().end());
  for (std::size_t l = 0; l < layout.layer_count(); ++l) {
    if (!layers.empty() && !layers[l]) {
      continue;
    }
    const std::size_t begin = layout.offset(l);
    const std::size_t end = begin + layout.channels(l);
    for (std::size_t c = begin; c < end; ++c) {
      values[c] += alpha * boundary.normal[c];
    }
  }
  return StyleCode(layout, std::move(values));
}

StyleCode morph(const StyleCode& a, const StyleCode& b, double t) {
  require_same_layout(a.layout(), b.layout(), "morph");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("morph ratio must lie in [0, 1]");
  }
  std::vector<double> values(a.size());
  for (std::size_t c = 0; c < values.size(); ++c) {
    values[c] = std::lerp(a[c], b[c], t);
  }
  return StyleCode(a.layout(), std::move(values));
}

StyleCode style_mix(const StyleCode& dst, const StyleCode& src, std::span<const std::size_t> layers) {
  require_same_layout(dst.layout(), src.layout(), "style mix");
  const Layout& layout = dst.layout();
  std::vector<double> values(dst.flat().begin(), dst.flat().end());
  for (const auto l : layers) {
    if (l >= layout.layer_count()) {
      throw InvalidArgument("style-mix layer " + std::to_string(l) + " outside layout");
    }
    const auto from = src.layer(l);
    std::copy(from.begin(), from.end(), values.begin() + static_cast<std::ptrdiff_t>(layout.offset(l)));
  }
  return StyleCode(layout, std::move(values));
}

StyleCode set_channel(const StyleCode& code, std::size_t layer, std::size_t channel, double value) {
  StyleCode out = code;
  out.set(code.layout().flat_index(layer, channel), value);
  return out;
}

StyleCode shift_channel(const StyleCode& code, std::size_t layer, std::size_t channel, double delta) {
  const std::size_t flat = code.layout().flat_index(layer, channel);
  StyleCode out = code;
  out.set(flat, code[flat] + delta);
  return out;
}

std::vector<std::size_t> parse_layer_list(const std::string& text) {
  std::set<std::size_t> layers;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      continue;
    }
    try {
      std::size_t used = 0;
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        const auto v = std::stoul(item, &used);
        if (used != item.size()) {
          throw std::invalid_argument(item);
        }
        layers.insert(v);
      } else {
        const auto lo = std::stoul(item.substr(0, dash), &used);
        if (used != dash) {
          throw std::invalid_argument(item);
        }
        const auto hi_text = item.substr(dash + 1);
        const auto hi = std::stoul(hi_text, &used);
        if (used != hi_text.size() || hi < lo) {
          throw std::invalid_argument(item);
        }
        for (auto v = lo; v <= hi; ++v) {
          layers.insert(v);
        }
      }
    } catch (const std::logic_error&) {
      throw InvalidArgument("cannot parse layer list '" + text + "'");
    }
  }
  return {layers.begin(), layers.end()};
}

}  // namespace latentlens::editing
