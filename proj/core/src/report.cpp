#include "podles/report.hpp"

#include "podles/version.hpp"

#include <json.hpp>

#include <chrono>
#include <sstream>

namespace podles {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json item_to_json(const CheckItem& item) {
  ordered_json j;
  j["id"] = item.id;
  j["value"] = item.value;
  j["threshold"] = item.threshold;
  j["comparator"] = item.comparator;
  j["pass"] = item.pass;
  if (!item.note.empty()) j["note"] = item.note;
  if (item.fit) {
    ordered_json f;
    f["rate"] = item.fit->rate;
    f["log_prefactor"] = item.fit->log_prefactor;
    f["residual"] = item.fit->residual;
    if (item.band) f["band"] = *item.band;
    ordered_json samples = ordered_json::array();
    for (const DecaySample& s : item.fit->samples) samples.push_back({s.l, s.norm});
    f["samples"] = samples;
    j["fit"] = f;
  }
  return j;
}

}  // namespace

std::string report_to_json(const VerificationReport& report, bool stamp) {
  ordered_json j;
  j["schema"] = report_schema_id;
  j["library_version"] = library_version;
  j["suite"] = report.suite;
  j["q"] = report.q;
  j["l_max"] = to_string(report.l_max);
  j["margin"] = report.margin;
  j["convention"] = report.convention_id;
  j["profile"] = report.profile;
  j["seed"] = report.seed;
  j["pass"] = report.pass;
  ordered_json items = ordered_json::array();
  for (const CheckItem& item : report.items) items.push_back(item_to_json(item));
  j["items"] = items;
  ordered_json info = ordered_json::object();
  for (const auto& [k, v] : report.info) info[k] = v;
  j["info"] = info;
  if (stamp) {
    const auto now = std::chrono::system_clock::now();
    j["timestamp"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  }
  return j.dump(2) + "\n";
}

std::string report_to_csv(const VerificationReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "suite,q,l_max,item,value,threshold,comparator,pass,note\n";
  for (const CheckItem& item : report.items) {
    std::string note = item.note;
    for (char& c : note)
      if (c == ',') c = ';';
    os << report.suite << ',' << report.q << ',' << to_string(report.l_max) << ',' << item.id
       << ',' << item.value << ',' << item.threshold << ',' << item.comparator << ','
       << (item.pass ? "true" : "false") << ',' << note << '\n';
  }
  return os.str();
}

}  // namespace podles
