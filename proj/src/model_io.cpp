#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "milsent/mil.hpp"

namespace milsent {

namespace {

constexpr std::string_view kMagic = "milsent-model";
constexpr int kVersion = 1;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw ModelFormatError("cannot format model value");
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, std::string_view key) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ModelFormatError("invalid value for '" + std::string(key) + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view s, std::string_view key) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ModelFormatError("invalid value for '" + std::string(key) + "'");
  }
  return v;
}

bool parse_flag(std::string_view s, std::string_view key) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw ModelFormatError("invalid flag for '" + std::string(key) + "'");
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Returns the value of the next line, which must be `key value`.
  std::string expect(std::string_view key) {
    std::string line;
    if (!std::getline(in_, line)) throw ModelFormatError("truncated model file (missing '" + std::string(key) + "')");
    const auto space = line.find(' ');
    if (space == std::string::npos || std::string_view(line).substr(0, space) != key) {
      throw ModelFormatError("expected '" + std::string(key) + "' in model file");
    }
    return line.substr(space + 1);
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_model(std::ostream& out, const MilModel& model) {
  if (model.theta.size() != model.dim + 1) throw ModelFormatError("theta length does not match dim");
  const auto& c = model.config;
  out << kMagic << ' ' << kVersion << '\n';
  out << "dim " << model.dim << '\n';
  out << "use_bias " << (c.use_bias ? 1 : 0) << '\n';
  out << "lambda " << format_double(c.lambda) << '\n';
  out << "learning_rate " << format_double(c.learning_rate) << '\n';
  out << "momentum " << format_double(c.momentum) << '\n';
  out << "epochs " << c.epochs << '\n';
  out << "groups_per_batch " << c.groups_per_batch << '\n';
  out << "kernel_gamma " << format_double(c.kernel_gamma) << '\n';
  out << "median_gamma " << (c.median_gamma ? 1 : 0) << '\n';
  out << "seed " << c.seed << '\n';
  out << "theta";
  for (double t : model.theta) out << ' ' << format_double(t);
  out << '\n' << "end\n";
}

MilModel read_model(std::istream& in) {
  LineReader r(in);
  const auto version = parse_unsigned(r.expect(kMagic), kMagic);
  if (version != kVersion) throw ModelFormatError("unsupported model version " + std::to_string(version));

  MilModel m;
  m.dim = parse_unsigned(r.expect("dim"), "dim");
  if (m.dim == 0) throw ModelFormatError("model dim must be positive");
  auto& c = m.config;
  c.use_bias = parse_flag(r.expect("use_bias"), "use_bias");
  c.lambda = parse_double(r.expect("lambda"), "lambda");
  c.learning_rate = parse_double(r.expect("learning_rate"), "learning_rate");
  c.momentum = parse_double(r.expect("momentum"), "momentum");
  c.epochs = parse_unsigned(r.expect("epochs"), "epochs");
  c.groups_per_batch = parse_unsigned(r.expect("groups_per_batch"), "groups_per_batch");
  c.kernel_gamma = parse_double(r.expect("kernel_gamma"), "kernel_gamma");
  c.median_gamma = parse_flag(r.expect("median_gamma"), "median_gamma");
  c.seed = parse_unsigned(r.expect("seed"), "seed");

  const std::string theta_line = r.expect("theta");
  std::string_view rest = theta_line;
  while (!rest.empty()) {
    const auto space = rest.find(' ');
    const auto field = rest.substr(0, space);
    m.theta.push_back(parse_double(field, "theta"));
    if (space == std::string_view::npos) break;
    rest.remove_prefix(space + 1);
  }
  if (m.theta.size() != m.dim + 1) {
    throw ModelFormatError("theta has " + std::to_string(m.theta.size()) + " entries, expected " +
                           std::to_string(m.dim + 1));
  }
  std::string end_line;
  if (!std::getline(in, end_line) || end_line != "end") throw ModelFormatError("missing 'end' marker");
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ModelFormatError(std::string("invalid training config in model: ") + e.what());
  }
  return m;
}

void save_model(const std::filesystem::path& path, const MilModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model file '" + path.string() + "'");
  write_model(out, model);
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

MilModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError("cannot open model file '" + path.string() + "'");
  try {
    return read_model(in);
  } catch (const ModelFormatError& e) {
    throw ModelFormatError(path.string() + ": " + e.what());
  }
}

}  // namespace milsent
