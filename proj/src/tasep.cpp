#include "kpz/tasep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace kpz::tasep {

Window::Window(Site lo, Site hi) : lo_(lo), hi_(hi) {
  if (!(lo < 0 && hi > 0)) {
    throw std::invalid_argument("window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "] must satisfy lo < 0 < hi");
  }
}

Window Window::for_horizon(double t, Site max_site) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("window horizon must be finite and >= 0");
  const Site reach = static_cast<Site>(std::ceil(t + 10.0 * std::sqrt(t)));
  const Site radius = std::abs(max_site) + reach + 64;
  return Window(-radius, radius);
}

InitialCondition InitialCondition::stationary(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("stationary density must lie in (0, 1)");
  return {InitialKind::kStationary, rho};
}

std::string to_string(const InitialCondition& ic) {
  switch (ic.kind) {
    case InitialKind::kStep:
      return "step";
    case InitialKind::kFlat:
      return "flat";
    case InitialKind::kStationary: {
      std::ostringstream os;
      os << "stationary(" << ic.rho << ")";
      return os.str();
    }
  }
  return "unknown";
}

MobileSet::MobileSet(Site lo, std::size_t span) : lo_(lo), position_(span, -1) {}

void MobileSet::insert(Site x) {
  auto& p = position_[index(x)];
  if (p >= 0) return;
  p = static_cast<std::int32_t>(members_.size());
  members_.push_back(x);
}

void MobileSet::erase(Site x) {
  auto& p = position_[index(x)];
  if (p < 0) return;
  const Site last = members_.back();
  members_[static_cast<std::size_t>(p)] = last;
  position_[index(last)] = p;
  members_.pop_back();
  p = -1;
}

ParticleSystem::ParticleSystem(const InitialCondition& ic, const Window& window)
    : ic_(ic), window_(window), occupation_(window.size(), 0), mobile_(window.lo(), window.size()) {}

ParticleSystem::ParticleSystem(const InitialCondition& ic, const Window& window, Engine& rng)
    : ParticleSystem(ic, window) {
  if (ic.kind == InitialKind::kStationary && !(ic.rho > 0.0 && ic.rho < 1.0)) {
    throw std::invalid_argument("stationary density must lie in (0, 1)");
  }
  std::bernoulli_distribution coin(ic.kind == InitialKind::kStationary ? ic.rho : 0.5);
  for (Site x = window.lo(); x <= window.hi(); ++x) {
    bool filled = false;
    switch (ic.kind) {
      case InitialKind::kStep:
        filled = x <= 0;
        break;
      case InitialKind::kFlat:
        filled = (x % 2) == 0;
        break;
      case InitialKind::kStationary:
        filled = coin(rng);
        break;
    }
    occupation_[offset(x)] = filled ? 1 : 0;
  }
  rebuild_mobile();
}

std::size_t ParticleSystem::particle_count() const {
  return static_cast<std::size_t>(std::count(occupation_.begin(), occupation_.end(), std::uint8_t{1}));
}

void ParticleSystem::rebuild_mobile() {
  mobile_ = MobileSet(window_.lo(), window_.size());
  for (Site x = window_.lo(); x < window_.hi(); ++x) {
    if (occupied(x) && !occupied(x + 1)) mobile_.insert(x);
  }
}

std::vector<Site> ParticleSystem::recompute_mobile() const {
  std::vector<Site> out;
  for (Site x = window_.lo(); x < window_.hi(); ++x) {
    if (occupied(x) && !occupied(x + 1)) out.push_back(x);
  }
  return out;
}

void ParticleSystem::apply_jump(Site x) {
  occupation_[offset(x)] = 0;
  occupation_[offset(x + 1)] = 1;
  mobile_.erase(x);
  if (x > window_.lo() && occupied(x - 1)) mobile_.insert(x - 1);
  if (x + 1 < window_.hi() && !occupied(x + 2)) mobile_.insert(x + 1);
  if (x == 0) ++passages_;
  ++events_;
}

StepOutcome ParticleSystem::gillespie_step(Engine& rng) {
  if (mobile_.empty()) return StepOutcome::kJammed;
  std::exponential_distribution<double> holding(static_cast<double>(mobile_.size()));
  time_ += holding(rng);
  std::uniform_int_distribution<std::size_t> pick(0, mobile_.size() - 1);
  apply_jump(mobile_.at(pick(rng)));
  return StepOutcome::kMoved;
}

void ParticleSystem::evolve(double t_end, Engine& rng) {
  if (!(t_end >= time_)) throw std::invalid_argument("evolve target time precedes the current time");
  std::exponential_distribution<double> holding;
  using Param = std::exponential_distribution<double>::param_type;
  while (!mobile_.empty()) {
    const std::size_t rate = mobile_.size();
    const double dt = holding(rng, Param(static_cast<double>(rate)));
    if (time_ + dt > t_end) break;
    time_ += dt;
    std::uniform_int_distribution<std::size_t> pick(0, rate - 1);
    apply_jump(mobile_.at(pick(rng)));
  }
  time_ = t_end;
}

std::string ParticleSystem::snapshot() const {
  std::ostringstream os;
  os << "tasep-snapshot 1\n";
  os << "ic ";
  switch (ic_.kind) {
    case InitialKind::kStep:
      os << "step\n";
      break;
    case InitialKind::kFlat:
      os << "flat\n";
      break;
    case InitialKind::kStationary:
      os << "stationary " << std::hexfloat << ic_.rho << std::defaultfloat << "\n";
      break;
  }
  os << "window " << window_.lo() << " " << window_.hi() << "\n";
  os << "time " << std::hexfloat << time_ << std::defaultfloat << "\n";
  os << "passages " << passages_ << "\n";
  os << "events " << events_ << "\n";
  os << "rle " << static_cast<int>(occupation_.front());
  std::size_t run = 0;
  std::uint8_t current = occupation_.front();
  for (std::uint8_t v : occupation_) {
    if (v == current) {
      ++run;
    } else {
      os << " " << run;
      current = v;
      run = 1;
    }
  }
  os << " " << run << "\n";
  return os.str();
}

namespace {

double parse_hex(const std::string& token) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') throw std::invalid_argument("snapshot: bad number '" + token + "'");
  return v;
}

void expect(std::istream& in, const std::string& key) {
  std::string word;
  if (!(in >> word) || word != key) throw std::invalid_argument("snapshot: expected '" + key + "'");
}

}  // namespace

ParticleSystem ParticleSystem::from_snapshot(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  int version = 0;
  expect(in, "tasep-snapshot");
  if (!(in >> version) || version != 1) throw std::invalid_argument("snapshot: unsupported version");

  expect(in, "ic");
  in >> word;
  InitialCondition ic;
  if (word == "step") {
    ic = InitialCondition::step();
  } else if (word == "flat") {
    ic = InitialCondition::flat();
  } else if (word == "stationary") {
    std::string rho;
    in >> rho;
    ic = InitialCondition::stationary(parse_hex(rho));
  } else {
    throw std::invalid_argument("snapshot: unknown initial condition '" + word + "'");
  }

  Site lo = 0, hi = 0;
  expect(in, "window");
  if (!(in >> lo >> hi)) throw std::invalid_argument("snapshot: bad window");
  ParticleSystem sys(ic, Window(lo, hi));

  expect(in, "time");
  in >> word;
  sys.time_ = parse_hex(word);
  expect(in, "passages");
  if (!(in >> sys.passages_)) throw std::invalid_argument("snapshot: bad passages");
  expect(in, "events");
  if (!(in >> sys.events_)) throw std::invalid_argument("snapshot: bad events");

  expect(in, "rle");
  int bit = 0;
  if (!(in >> bit) || (bit != 0 && bit != 1)) throw std::invalid_argument("snapshot: bad leading bit");
  std::size_t filled = 0, run = 0;
  while (in >> run) {
    if (run == 0 || filled + run > sys.occupation_.size()) throw std::invalid_argument("snapshot: bad run length");
    std::fill_n(sys.occupation_.begin() + static_cast<std::ptrdiff_t>(filled), run, static_cast<std::uint8_t>(bit));
    filled += run;
    bit ^= 1;
  }
  if (filled != sys.occupation_.size()) throw std::invalid_argument("snapshot: runs do not cover the window");
  sys.rebuild_mobile();
  return sys;
}

std::int64_t height(const ParticleSystem& sys, Site x) {
  if (!sys.window().contains(x)) throw std::out_of_range("height: site " + std::to_string(x) + " outside window");
  std::int64_t h = 2 * sys.passages();
  if (x >= 1) {
    for (Site y = 1; y <= x; ++y) h += sys.occupied(y) ? -1 : 1;
  } else {
    for (Site y = x + 1; y <= 0; ++y) h -= sys.occupied(y) ? -1 : 1;
  }
  return h;
}

HeightProfile height_profile(const ParticleSystem& sys) {
  const Window& w = sys.window();
  HeightProfile p;
  p.lo = w.lo();
  p.h.assign(w.size(), 0);
  const std::int64_t anchor = 2 * sys.passages();
  p.h[static_cast<std::size_t>(-w.lo())] = anchor;
  for (Site x = 1; x <= w.hi(); ++x) {
    p.h[static_cast<std::size_t>(x - w.lo())] = p.at(x - 1) + (sys.occupied(x) ? -1 : 1);
  }
  for (Site x = -1; x >= w.lo(); --x) {
    p.h[static_cast<std::size_t>(x - w.lo())] = p.at(x + 1) - (sys.occupied(x + 1) ? -1 : 1);
  }
  return p;
}

double limit_shape_step(double xi) {
  const double a = std::abs(xi);
  return a <= 1.0 ? 0.5 * (1.0 + xi * xi) : a;
}

double growth_velocity(double slope) {
  if (!(std::abs(slope) <= 1.0)) throw std::invalid_argument("slope must satisfy |u| <= 1");
  return 0.5 * (1.0 - slope * slope);
}

double characteristic_speed(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("density must lie in [0, 1]");
  return 1.0 - 2.0 * rho;
}

Site nearest_site(double x) { return static_cast<Site>(std::llround(x)); }

double rescale_step_value(double h, double t, double u) {
  const double half = 0.5 * t;
  const double scale = std::cbrt(half);
  return (h - (half + u * u * scale)) / (-scale);
}

double rescale_flat_value(double h, double t, double /*u*/) { return (h - 0.5 * t) / (-std::cbrt(t)); }

double rescale_stationary_value(double h, double t, double rho) {
  return (h - (1.0 - 2.0 * rho * (1.0 - rho)) * t) / std::cbrt(t);
}

Site step_site(double t, double u) { return nearest_site(2.0 * u * std::pow(0.5 * t, 2.0 / 3.0)); }
Site flat_site(double t, double u) { return nearest_site(2.0 * u * std::pow(t, 2.0 / 3.0)); }
Site stationary_site(double t, double u, double rho) {
  return nearest_site(characteristic_speed(rho) * t + u * std::pow(t, 2.0 / 3.0));
}

double rescale_step(const ParticleSystem& sys, double t, double u) {
  return rescale_step_value(static_cast<double>(height(sys, step_site(t, u))), t, u);
}

double rescale_flat(const ParticleSystem& sys, double t, double u) {
  return rescale_flat_value(static_cast<double>(height(sys, flat_site(t, u))), t, u);
}

double rescale_stationary(const ParticleSystem& sys, double t, double u, double rho) {
  return rescale_stationary_value(static_cast<double>(height(sys, stationary_site(t, u, rho))), t, rho);
}

std::vector<DensityBin> density_profile(const ParticleSystem& sys, double t, double bin_width) {
  if (!(t > 0.0)) throw std::invalid_argument("density profile needs t > 0");
  if (!(bin_width > 0.0)) throw std::invalid_argument("density profile needs a positive bin width");
  const Window& w = sys.window();
  auto bin_of = [&](Site x) { return static_cast<std::int64_t>(std::floor(static_cast<double>(x) / t / bin_width)); };
  const std::int64_t first = bin_of(w.lo());
  const std::int64_t last = bin_of(w.hi());
  std::vector<DensityBin> bins(static_cast<std::size_t>(last - first + 1));
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const double index = static_cast<double>(first + static_cast<std::int64_t>(k));
    bins[k].xi_lo = index * bin_width;
    bins[k].xi_hi = (index + 1.0) * bin_width;
  }
  for (Site x = w.lo(); x <= w.hi(); ++x) {
    DensityBin& b = bins[static_cast<std::size_t>(bin_of(x) - first)];
    ++b.sites;
    if (sys.occupied(x)) ++b.occupied;
  }
  return bins;
}

}  // namespace kpz::tasep
