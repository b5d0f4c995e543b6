#include "it2fls/types.hpp"

#include <algorithm>
#include <cctype>

namespace it2fls {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(FsType v) { return v == FsType::H ? "h" : "hs"; }

std::string_view to_string(FiringMode v) { return v == FiringMode::PROD ? "prod" : "htsk2"; }

std::string_view to_string(Cscm v) {
  switch (v) {
    case Cscm::KM: return "km";
    case Cscm::WKM: return "wkm";
    case Cscm::NT: return "nt";
    case Cscm::WNT: return "wnt";
  }
  return "?";
}

FsType parse_fs_type(std::string_view s) {
  const auto l = lower(s);
  if (l == "h") return FsType::H;
  if (l == "hs") return FsType::HS;
  throw std::invalid_argument("unknown fs type '" + std::string(s) + "' (expected h or hs)");
}

FiringMode parse_firing_mode(std::string_view s) {
  const auto l = lower(s);
  if (l == "prod") return FiringMode::PROD;
  if (l == "htsk2") return FiringMode::HTSK2;
  throw std::invalid_argument("unknown firing mode '" + std::string(s) + "' (expected prod or htsk2)");
}

Cscm parse_cscm(std::string_view s) {
  const auto l = lower(s);
  if (l == "km") return Cscm::KM;
  if (l == "wkm") return Cscm::WKM;
  if (l == "nt") return Cscm::NT;
  if (l == "wnt") return Cscm::WNT;
  throw std::invalid_argument("unknown cscm '" + std::string(s) + "' (expected km, wkm, nt or wnt)");
}

}  // namespace it2fls
