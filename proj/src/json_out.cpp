#include "usot/json_out.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace usot {

namespace {

void dump_into(const Json& v, std::string& out) {
  switch (v.type()) {
    case Json::value_t::object: {
      out.push_back('{');
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out.push_back(',');
        first = false;
        out += Json(key).dump();
        out.push_back(':');
        dump_into(item, out);
      }
      out.push_back('}');
      break;
    }
    case Json::value_t::array: {
      out.push_back('[');
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out.push_back(',');
        dump_into(v[i], out);
      }
      out.push_back(']');
      break;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out += buf;
      }
      break;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string dump_json(const Json& value) {
  std::string out;
  dump_into(value, out);
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace usot
