#include "cwave/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace cwave {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kMagic[8] = {'C', 'W', 'A', 'V', 'S', 'N', 'A', 'P'};

[[noreturn]] void io_fail(const std::string& what) { throw Error(ErrorKind::Io, what); }

template <typename T>
T from_le(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <typename T>
T to_le(T v) {
  return from_le(v);
}

std::vector<char> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <typename T>
std::vector<double> decode_values(const std::vector<char>& bytes, std::size_t count) {
  if (bytes.size() != count * sizeof(T)) fail("payload length mismatch");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    T v;
    std::memcpy(&v, bytes.data() + i * sizeof(T), sizeof(T));
    out[i] = static_cast<double>(from_le(v));
  }
  return out;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    fail("malformed " + what);
  }
}

template <typename T>
T get_key(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) fail(what + " missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(what + " key '" + std::string(key) + "' has the wrong type");
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail("cannot write " + path.string());
  out << text;
  if (!out) io_fail("write failed for " + path.string());
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_snapshot(const SnapshotFrame& frame, const fs::path& path) {
  const auto& g = frame.field.grid();
  json meta;
  meta["format_version"] = 1;
  meta["t"] = frame.t;
  meta["step"] = frame.step;
  meta["dims"] = g.dims();
  meta["dtype"] = "f64";
  meta["order"] = "x-fastest";
  for (int a = 0; a < g.dims(); ++a) {
    meta["n"].push_back(g.n(a));
    meta["shape"].push_back(g.stored(a));
    meta["min"].push_back(g.axis(a).min);
    meta["max"].push_back(g.axis(a).max);
    meta["h"].push_back(g.h(a));
  }
  const std::string text = meta.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail("cannot write " + path.string());
  out.write(kMagic, sizeof kMagic);
  const std::uint64_t len = to_le<std::uint64_t>(text.size());
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  const auto& v = frame.field.values();
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  } else {
    for (Index i = 0; i < v.size(); ++i) {
      const double le = to_le(v[i]);
      out.write(reinterpret_cast<const char*>(&le), sizeof le);
    }
  }
  if (!out) io_fail("write failed for " + path.string());
}

SnapshotFrame read_snapshot(const fs::path& path) {
  const auto bytes = slurp(path);
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    io_fail("not a snapshot file");
  std::uint64_t len = 0;
  if (bytes.size() < sizeof kMagic + sizeof len) io_fail("corrupt snapshot");
  std::memcpy(&len, bytes.data() + sizeof kMagic, sizeof len);
  len = from_le(len);
  const std::size_t head = sizeof kMagic + sizeof len;
  if (len > bytes.size() - head) io_fail("corrupt snapshot");

  json meta;
  try {
    meta = json::parse(bytes.begin() + head, bytes.begin() + static_cast<std::ptrdiff_t>(head + len));
  } catch (const json::exception&) {
    io_fail("corrupt snapshot");
  }

  SnapshotFrame frame;
  std::vector<Axis<double>> axes;
  try {
    if (meta.at("dtype").get<std::string>() != "f64") io_fail("unsupported dtype");
    frame.t = meta.at("t").get<double>();
    frame.step = meta.at("step").get<int>();
    const int dims = meta.at("dims").get<int>();
    if (dims != 2 && dims != 3) io_fail("corrupt snapshot");
    for (int a = 0; a < dims; ++a) {
      axes.push_back({meta.at("min").at(a).get<double>(), meta.at("max").at(a).get<double>(),
                      meta.at("n").at(a).get<int>(), meta.at("h").at(a).get<double>()});
    }
  } catch (const json::exception&) {
    io_fail("corrupt snapshot");
  }
  Grid g;
  try {
    g = Grid::from_axes(axes);
  } catch (const Error&) {
    io_fail("corrupt snapshot");
  }

  const std::size_t payload = bytes.size() - head - len;
  if (payload != static_cast<std::size_t>(g.size()) * sizeof(double)) io_fail("corrupt snapshot");
  frame.field = ScalarField(g);
  const char* src = bytes.data() + head + len;
  auto& v = frame.field.values();
  for (Index i = 0; i < v.size(); ++i) {
    double d;
    std::memcpy(&d, src + i * sizeof(double), sizeof d);
    v[i] = from_le(d);
  }
  return frame;
}

MediaModel<double> load_model(const fs::path& rho_path, const fs::path& c_path,
                              const fs::path& meta_path) {
  const auto text = slurp(meta_path);
  const json meta = parse_json(std::string(text.begin(), text.end()), "model meta");
  const std::string what = "model meta";
  const int nx = get_key<int>(meta, "nx", what);
  const int ny = get_key<int>(meta, "ny", what);
  const int nz = meta.contains("nz") ? get_key<int>(meta, "nz", what) : 1;
  const auto dtype = get_key<std::string>(meta, "dtype", what);
  if (dtype != "f32" && dtype != "f64") fail("unsupported dtype");
  if (meta.contains("order") && get_key<std::string>(meta, "order", what) != "x-fastest")
    fail("unsupported order");
  auto h = get_key<std::vector<double>>(meta, "h", what);
  auto origin = get_key<std::vector<double>>(meta, "origin", what);
  require(nx >= 1 && ny >= 1 && nz >= 1, "model meta counts must be positive");

  const int dims = nz > 1 ? 3 : 2;
  std::vector<int> nodes{nx, ny};
  if (dims == 3) nodes.push_back(nz);
  // A single spacing applies to every axis.
  if (h.size() == 1) h.assign(dims, h[0]);
  // 2D models may carry a third origin/spacing entry for the unused axis.
  if (h.size() == 3 && dims == 2) h.resize(2);
  if (origin.size() == 3 && dims == 2) origin.resize(2);
  require(static_cast<int>(h.size()) == dims && static_cast<int>(origin.size()) == dims,
          "model meta h/origin arity mismatch");
  const Grid g = Grid::from_nodes(std::span<const double>(origin), std::span<const double>(h),
                                  std::span<const int>(nodes));

  const std::size_t count = std::size_t(nx) * std::size_t(ny) * std::size_t(nz);
  const auto read_values = [&](const fs::path& p) {
    const auto bytes = slurp(p);
    return dtype == "f32" ? decode_values<float>(bytes, count) : decode_values<double>(bytes, count);
  };
  MediaModel<double> m{ScalarField(g), ScalarField(g)};
  const auto rho = read_values(rho_path);
  const auto c = read_values(c_path);
  for (std::size_t i = 0; i < count; ++i) {
    m.rho.values()[static_cast<Index>(i)] = rho[i];
    m.c.values()[static_cast<Index>(i)] = c[i];
  }
  m.validate();
  return m;
}

void write_energy_csv(const EnergyTrace<double>& trace, const fs::path& path) {
  std::ostringstream os;
  trace.write_csv(os);
  write_file(path, os.str());
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& os) {
  const auto old = os.precision();
  os << "h,tau,E,order\n" << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.h << ',' << r.tau << ',' << r.error << ',';
    if (std::isfinite(r.order)) os << r.order;
    os << '\n';
  }
  os.precision(old);
}

std::string cfl_report_json(const CflReport<double>& rep) {
  json j;
  j["r"] = rep.r;
  j["tau_over_h"] = rep.tau_over_h;
  j["threshold"] = rep.threshold;
  j["tau_over_h_limit"] = rep.tau_over_h_limit;
  j["c_max"] = rep.c_max;
  j["q_max"] = rep.q_max;
  j["q_min"] = rep.q_min;
  j["q_ratio"] = rep.q_max / rep.q_min;
  j["h"] = rep.h;
  j["spacing_approximated"] = rep.spacing_approximated;
  j["pass"] = rep.pass;
  return j.dump(2);
}

std::string spectral_report_json(const SpectralReport<double>& rep) {
  json j;
  j["n"] = rep.n;
  j["eigenvalues_a"] = rep.eigenvalues_a;
  j["eigenvalues_b_imag"] = rep.eigenvalues_b_imag;
  j["eigenvalues_m"] = json::array();
  for (const auto& z : rep.eigenvalues_m)
    j["eigenvalues_m"].push_back({number_or_null(z.real()), number_or_null(z.imag())});
  j["bound"] = rep.bound;
  j["zero_eig_present"] = rep.zero_eig_present;
  return j.dump(2);
}

}  // namespace cwave
