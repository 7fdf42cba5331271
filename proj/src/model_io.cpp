#include "sdwsn/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdwsn/config.hpp"
#include "sdwsn/textio.hpp"

namespace sdwsn {
namespace {

const char* lifting_name(Lifting l) {
  switch (l) {
    case Lifting::full:
      return "full";
    case Lifting::reduced:
      return "reduced";
    case Lifting::linear:
      return "linear";
  }
  return "full";
}

Lifting lifting_from(const std::string& s) {
  if (s == "full") return Lifting::full;
  if (s == "reduced") return Lifting::reduced;
  if (s == "linear") return Lifting::linear;
  throw IoError("model meta: unknown lifting '" + s + "'");
}

}  // namespace

void save_model(const std::string& dir, const NetworkModel& model) {
  std::filesystem::create_directories(dir);
  std::ofstream meta(dir + "/meta.txt");
  if (!meta) throw IoError("cannot write model meta in " + dir);
  meta << "p = " << model.part.p << "\n";
  meta << "m = " << model.part.m << "\n";
  meta << "n =";
  for (int v : model.part.n) meta << ' ' << v;
  meta << "\nr =";
  for (int v : model.part.r) meta << ' ' << v;
  meta << "\nlifting = " << lifting_name(model.part.lifting) << "\n";
  meta << "variant = "
       << (model.variant == FactorVariant::orthonormal_t ? "orthonormal-t"
                                                         : "weighted-t")
       << "\n";
  for (int j = 0; j < model.part.p; ++j) {
    if (model.part.r[j] == 0) continue;  // empty factors, rebuilt from meta
    const std::string suffix = "_" + std::to_string(j) + ".txt";
    write_mat(dir + "/T" + suffix, model.fusion.blocks[j]);
    write_mat(dir + "/S0" + suffix, model.sensors[j].s0);
    write_mat(dir + "/S1" + suffix, model.sensors[j].s1);
    write_mat(dir + "/S2" + suffix, model.sensors[j].s2);
  }
}

NetworkModel load_model(const std::string& dir) {
  KvConfig kv = KvConfig::parse_file(dir + "/meta.txt");
  NetworkModel model;
  const int p = kv.get_int("", "p", 0);
  const int m = kv.get_int("", "m", 0);
  std::vector<int> n = kv.get_ints("", "n");
  std::vector<int> r = kv.get_ints("", "r");
  model.part = BlockPartition::make(m, n, r,
                                    lifting_from(kv.require_string("", "lifting")));
  require(model.part.p == p, "model meta: p does not match n/r lists");
  model.variant = kv.get_string("", "variant", "orthonormal-t") == "weighted-t"
                      ? FactorVariant::weighted_t
                      : FactorVariant::orthonormal_t;
  for (int j = 0; j < p; ++j) {
    SecondDegreeSensor sensor;
    if (model.part.r[j] == 0) {
      sensor.s0 = Mat(0, 1);
      sensor.s1 = Mat(0, model.part.n[j]);
      sensor.s2 = Mat(0, model.part.n[j]);
      model.sensors.push_back(std::move(sensor));
      model.fusion.blocks.push_back(Mat(m, 0));
      continue;
    }
    const std::string suffix = "_" + std::to_string(j) + ".txt";
    sensor.s0 = read_mat(dir + "/S0" + suffix);
    sensor.s1 = read_mat(dir + "/S1" + suffix);
    sensor.s2 = read_mat(dir + "/S2" + suffix);
    model.sensors.push_back(std::move(sensor));
    model.fusion.blocks.push_back(read_mat(dir + "/T" + suffix));
  }
  return model;
}

}  // namespace sdwsn
