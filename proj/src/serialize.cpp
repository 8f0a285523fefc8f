#include "pag/serialize.hpp"

#include <cstdio>

namespace pag {
namespace {

std::string format_double(double x) {
  // Shortest decimal that round-trips; keeps CSV output byte-stable.
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == x) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[64];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, x);
      std::sscanf(shorter, "%lf", &back);
      if (back == x) return shorter;
    }
  }
  return buf;
}

}  // namespace

ordered_json sparse_dist_json(const std::vector<double>& dist) {
  ordered_json out = ordered_json::object();
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (dist[k] != 0.0) out[std::to_string(k)] = dist[k];
  }
  return out;
}

ordered_json to_json(const McReport& rep) {
  ordered_json j;
  j["n"] = rep.n;
  j["reps"] = rep.reps;
  j["mean"] = rep.mean;
  j["variance"] = rep.variance;
  ordered_json hist = ordered_json::object();
  for (const auto& [w, count] : rep.w_histogram) hist[std::to_string(w)] = count;
  j["w_histogram"] = hist;
  j["mean_ci_halfwidth"] = rep.mean_ci_halfwidth;
  j["seed"] = rep.seed;
  return j;
}

ordered_json to_json(const SteinBoundReport& rep) {
  ordered_json j;
  j["n"] = rep.n;
  j["var_cond"] = rep.var_cond;
  j["second_moment"] = rep.second_moment;
  j["mu_hat"] = rep.mu_hat;
  j["sigma_hat"] = rep.sigma_hat;
  j["bound"] = rep.bound;
  j["d_w_empirical"] = rep.d_w_empirical;
  j["outer_reps"] = rep.outer_reps;
  j["inner_reps"] = rep.inner_reps;
  return j;
}

ordered_json to_json(const RateFit& fit) {
  ordered_json j;
  ordered_json points = ordered_json::array();
  for (const auto& p : fit.points) {
    ordered_json row;
    row["n"] = p.n;
    row["d_w"] = p.d_w;
    row["reps"] = p.reps;
    row["seed"] = p.seed;
    points.push_back(row);
  }
  j["points"] = points;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["theoretical_exponent"] = fit.theoretical_exponent;
  j["regime"] = regime_name(fit.regime);
  return j;
}

ordered_json to_json(const DegreeDistReport& rep) {
  ordered_json j;
  j["n"] = rep.n;
  j["reps"] = rep.reps;
  j["kmax"] = rep.kmax;
  j["tv_indegree"] = rep.tv_indegree;
  j["limit_mass"] = rep.limit_mass;
  j["lambda_hat"] = rep.lambda_hat;
  j["outdegree_poisson_tv"] = rep.outdegree_poisson_tv;
  j["seed"] = rep.seed;
  return j;
}

ordered_json to_json(const ExactEnumeration& en) {
  ordered_json j;
  j["n"] = en.n;
  j["w_dist"] = sparse_dist_json(en.w_dist);
  ordered_json theta = ordered_json::array();
  for (uint32_t i = 1; i <= en.n; ++i) theta.push_back(en.isolation_probs[i]);
  j["theta"] = theta;
  ordered_json cov = ordered_json::array();
  for (uint32_t i = 1; i <= en.n; ++i) {
    ordered_json row = ordered_json::array();
    for (uint32_t k = 1; k <= en.n; ++k) row.push_back(en.pair_cov[i][k]);
    cov.push_back(row);
  }
  j["pair_cov"] = cov;
  ordered_json marg = ordered_json::object();
  for (uint32_t src = 2; src <= en.n; ++src) {
    for (uint32_t dst = 1; dst < src; ++dst) {
      marg[std::to_string(src) + "->" + std::to_string(dst)] =
          en.edge_marginals[src][dst];
    }
  }
  j["edge_marginals"] = marg;
  j["mean"] = en.mean;
  return j;
}

ordered_json to_json(const IndegreeLawTable& table) {
  ordered_json j;
  j["vertex"] = table.vertex;
  j["horizon"] = table.horizon;
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.law) rows.push_back(row);
  j["law"] = rows;
  return j;
}

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::Sub: return "sub";
    case Regime::Critical: return "critical";
    case Regime::Super: return "super";
  }
  return "unknown";
}

std::string couple_csv(const std::vector<CouplingSample>& samples) {
  std::string out = "w,w_s,i,d,deg_pos,r\n";
  for (const auto& s : samples) {
    out += std::to_string(s.w);
    out += ',';
    out += std::to_string(s.w_s);
    out += ',';
    out += std::to_string(s.i);
    out += ',';
    out += std::to_string(s.d);
    out += ',';
    out += std::to_string(s.deg_pos);
    out += ',';
    out += std::to_string(s.r);
    out += '\n';
  }
  return out;
}

std::string rate_points_csv(const std::vector<RatePoint>& points) {
  std::string out = "n,d_w,reps,seed\n";
  for (const auto& p : points) {
    out += std::to_string(p.n);
    out += ',';
    out += format_double(p.d_w);
    out += ',';
    out += std::to_string(p.reps);
    out += ',';
    out += std::to_string(p.seed);
    out += '\n';
  }
  return out;
}

}  // namespace pag
