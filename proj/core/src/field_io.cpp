#include "eulerinf/field_io.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include "json.hpp"

namespace eulerinf {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "eulerinf-field";
constexpr int kVersion = 1;

GridPtr rebuild_grid(const json& g) {
  const std::string spacing = g.at("spacing").get<std::string>();
  const double r_min = g.at("r_min").get<double>();
  const double r_max = g.at("r_max").get<double>();
  const auto n = g.at("n").get<std::size_t>();
  if (spacing == "log_uniform") return make_log_grid(r_min, r_max, n);
  if (spacing == "uniform") return make_uniform_grid(r_min, r_max, n);
  throw FieldFormatError("unknown grid spacing '" + spacing + "'");
}

}  // namespace

std::string field_to_json(const PolarField& field) {
  if (!field.grid_ptr()) throw std::invalid_argument("cannot serialize an empty field");
  const auto& g = field.grid();
  json out;
  out["format"] = kFormat;
  out["version"] = kVersion;
  out["grid"] = {{"spacing", g.spacing() == Spacing::log_uniform ? "log_uniform" : "uniform"},
                 {"r_min", g.r_min()},
                 {"r_max", g.r_max()},
                 {"n", g.size()}};
  out["k_max"] = field.k_max();
  out["symmetry"] = field.symmetry() ? json(*field.symmetry()) : json(nullptr);
  json rows = json::array();
  for (std::size_t j = 0; j < field.rows(); ++j) {
    std::vector<double> re, im;
    re.reserve(field.n_r());
    im.reserve(field.n_r());
    for (const cplx& c : field.row(j)) {
      re.push_back(c.real());
      im.push_back(c.imag());
    }
    rows.push_back({{"k", field.wavenumber(j)}, {"re", std::move(re)}, {"im", std::move(im)}});
  }
  out["rows"] = std::move(rows);
  return out.dump(1) + "\n";
}

PolarField field_from_json(std::string_view text) {
  try {
    const json in = json::parse(text);
    if (in.at("format").get<std::string>() != kFormat) throw FieldFormatError("not an eulerinf field file");
    if (in.at("version").get<int>() != kVersion) {
      throw FieldFormatError("unsupported field version " + std::to_string(in.at("version").get<int>()));
    }
    auto grid = rebuild_grid(in.at("grid"));
    std::optional<int> sym;
    if (!in.at("symmetry").is_null()) sym = in.at("symmetry").get<int>();
    PolarField f(grid, in.at("k_max").get<int>(), sym);
    const json& rows = in.at("rows");
    if (rows.size() != f.rows()) throw FieldFormatError("row count does not match k_max and symmetry");
    for (std::size_t j = 0; j < f.rows(); ++j) {
      const json& r = rows[j];
      if (r.at("k").get<int>() != f.wavenumber(j)) throw FieldFormatError("rows out of order");
      const auto re = r.at("re").get<std::vector<double>>();
      const auto im = r.at("im").get<std::vector<double>>();
      if (re.size() != f.n_r() || im.size() != f.n_r()) throw FieldFormatError("row length does not match the grid");
      auto row = f.row(j);
      for (std::size_t i = 0; i < f.n_r(); ++i) row[i] = {re[i], im[i]};
    }
    return f;
  } catch (const json::exception& e) {
    throw FieldFormatError(std::string("malformed field file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FieldFormatError(std::string("invalid field: ") + e.what());
  }
}

void save_field(const std::filesystem::path& path, const PolarField& field) {
  write_file_atomic(path, field_to_json(field));
}

PolarField load_field(const std::filesystem::path& path) { return field_from_json(read_file(path)); }

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id() << "." << counter++;
  const std::filesystem::path tmp = path.string() + suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace eulerinf
