// xplain-make-scenarios: writes the bundled demo data root (datasets, trained
// models and scenario bundles). Output is deterministic.
//
//   xplain_make_scenarios OUT_DIR

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "xplain/core/error.hpp"
#include "xplain/core/random.hpp"
#include "xplain/platform/bundle.hpp"
#include "xplain/platform/io.hpp"
#include "xplain/platform/serialization.hpp"
#include "xplain/platform/workspace.hpp"

namespace fs = std::filesystem;
using namespace xplain;

namespace {

constexpr const char* kCreatedAt = "2026-01-01T00:00:00Z";

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[rng.below(items.size())];
}

double normal(Rng& rng, double mean, double sd) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void write_json(const fs::path& path, const Json& doc) { write_file_atomic(path, doc.dump(2) + "\n"); }

std::string train(ModelStore& store, const Dataset& dataset, ModelKind kind, TrainConfig config) {
  TrainRequest request;
  request.kind = kind;
  request.config = std::move(config);
  request.created_at = kCreatedAt;
  const TrainOutcome outcome = train_and_store(store, dataset, request);
  std::cout << dataset.id << ": " << to_string(kind) << " " << outcome.model_id << " holdout accuracy "
            << outcome.holdout_accuracy << "\n";
  return outcome.model_id;
}

std::string fill(std::string text, Rng& rng) {
  static const std::vector<std::string> when{"this morning", "today", "yesterday", "on monday",
                                             "again", "tonight", "last friday"};
  static const std::vector<std::string> route{"blue line", "red line", "express", "night bus",
                                              "airport shuttle"};
  static const std::vector<std::string> street{"main street", "park avenue", "station road",
                                               "market square", "the hospital"};
  auto replace = [&](const std::string& slot, const std::string& value) {
    for (auto at = text.find(slot); at != std::string::npos; at = text.find(slot)) {
      text.replace(at, slot.size(), value);
    }
  };
  replace("{when}", pick(rng, when));
  replace("{route}", pick(rng, route));
  replace("{street}", pick(rng, street));
  // Cycling keeps every delay from 2 to 20 minutes in the vocabulary.
  static int delay = 0;
  replace("{n}", std::to_string(2 + delay++ % 19));
  return text;
}

void make_transport(const fs::path& root, ModelStore& store) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> classes{
      {"late",
       {"The bus was {n} minutes late {when}", "My {route} came {n} minutes late again",
        "Waited {n} minutes because the bus was late", "The {route} was {n} minutes behind schedule {when}",
        "Bus arrived {n} minutes late at {street}"}},
      {"wrong_stop",
       {"The driver let me out at the wrong stop {when}", "Bus stopped at the wrong stop on {street}",
        "I was dropped at the wrong stop near {street}", "The {route} went to the wrong stop {when}",
        "Wrong stop announced on the {route}"}},
      {"missed_stop",
       {"The bus drove past my stop {when}", "Driver did not stop at {street} although I pressed the button",
        "The {route} skipped the stop at {street}", "Bus missed my stop and did not halt {when}",
        "The {route} passed {street} without stopping"}},
      {"unfriendly_driver",
       {"The driver was rude to me {when}", "Unfriendly driver shouted at passengers on the {route}",
        "The driver was very impolite and unfriendly", "Rude driver ignored my question at {street}",
        "The {route} driver was unfriendly {when}"}},
      {"ticketing",
       {"The ticket machine did not accept my card {when}", "I was charged twice for one ticket on the {route}",
        "Could not buy a ticket because the machine was broken", "The app sold me the wrong ticket {when}",
        "Ticket validator at {street} was out of order"}},
  };
  Rng rng(101);
  std::string lines;
  for (int i = 0; i < 200; ++i) {
    const auto& [label, templates] = classes[static_cast<std::size_t>(i) % classes.size()];
    const Json row{{"id", "c" + std::to_string(i + 1)}, {"label", label}, {"text", fill(pick(rng, templates), rng)}};
    lines += row.dump() + "\n";
  }
  const fs::path data = root / "datasets/transport/complaints.jsonl";
  write_file_atomic(data, lines);
  const Dataset dataset = load_text_jsonl(data, "transport_complaints");

  TrainConfig mlp;
  mlp.hidden_sizes = {16};
  mlp.epochs = 300;
  mlp.learning_rate = 0.5;
  const std::string mlp_id = train(store, dataset, ModelKind::mlp, mlp);
  TrainConfig logistic;
  logistic.epochs = 300;
  logistic.learning_rate = 0.5;
  const std::string logistic_id = train(store, dataset, ModelKind::logistic, logistic);

  const std::vector<std::tuple<std::string, std::string, std::string>> demos{
      {"t1", "late", "The bus was 4 minutes late this morning"},
      {"t2", "wrong_stop", "The driver let me out at the wrong stop"},
      {"t3", "missed_stop", "The bus drove past my stop again"},
      {"t4", "unfriendly_driver", "The driver was rude to me today"},
      {"t5", "ticketing", "The ticket machine did not accept my card"},
      {"t6", "late", "Waited 12 minutes because the bus was late"},
  };
  Json samples = Json::array();
  for (const auto& [id, label, text] : demos) samples.push_back({{"id", id}, {"label", label}, {"text", text}});
  const fs::path dir = root / "scenarios/transport";
  write_json(dir / "manifest.json",
             {{"id", "transport"},
              {"title", "Public transport complaints"},
              {"task", "text"},
              {"dataset", {{"id", dataset.id}, {"path", "../../datasets/transport/complaints.jsonl"}, {"format", "jsonl"}}},
              {"models", {mlp_id, logistic_id}},
              {"methods", {"lrp", "lime"}},
              {"demo_samples", samples},
              {"annotations", "annotations.json"}});
  write_json(dir / "annotations.json",
             {{"t1", {"4@3", "minutes@4", "late@5"}},
              {"t2", {"wrong@7", "stop@8"}},
              {"t3", {"past@3", "stop@5"}},
              {"t4", {"rude@3"}},
              {"t5", {"ticket@1", "machine@2"}},
              {"t6", {"12@1", "minutes@2", "late@7"}}});
}

struct Make {
  std::string name;
  Rgb grille;
};

ImageSample car_image(Rng& rng, const Rgb& grille) {
  ImageSample image(32, 32, Rgb{});
  auto jitter = [&](int base) {
    return static_cast<std::uint8_t>(std::clamp(base + static_cast<int>(rng.below(21)) - 10, 0, 255));
  };
  const Rgb body{static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256))};
  for (int r = 0; r < 32; ++r) {
    for (int c = 0; c < 32; ++c) {
      Rgb px{jitter(128), jitter(128), jitter(128)};
      if (r >= 8 && r < 28 && c >= 2 && c < 30) px = body;
      if (r >= 16 && r < 24 && c >= 8 && c < 24) px = {jitter(grille.r), jitter(grille.g), jitter(grille.b)};
      image.at(r, c) = px;
    }
  }
  return image;
}

void make_cars(const fs::path& root, ModelStore& store) {
  const std::vector<Make> makes{{"aurora", {210, 40, 40}},
                                {"borealis", {40, 190, 60}},
                                {"cirrus", {40, 60, 210}},
                                {"dynamo", {230, 220, 40}}};
  Rng rng(202);
  const fs::path data = root / "datasets/cars";
  std::string labels = "file,label\n";
  for (int i = 0; i < 160; ++i) {
    const Make& make = makes[static_cast<std::size_t>(i) % makes.size()];
    char name[32];
    std::snprintf(name, sizeof name, "car%03d.ppm", i + 1);
    write_ppm(data / name, car_image(rng, make.grille));
    labels += std::string(name) + "," + make.name + "\n";
  }
  write_file_atomic(data / "labels.csv", labels);
  const Dataset dataset = load_image_folder(data, "car_images");

  TrainConfig mlp;
  mlp.hidden_sizes = {16};
  mlp.epochs = 300;
  mlp.learning_rate = 0.5;
  const std::string mlp_id = train(store, dataset, ModelKind::mlp, mlp);

  const fs::path dir = root / "scenarios/cars";
  Json samples = Json::array();
  Json annotations = Json::object();
  for (int i = 0; i < 7; ++i) {
    const Make& make = makes[static_cast<std::size_t>(i) % makes.size()];
    const std::string id = "car" + std::to_string(i + 1);
    write_ppm(dir / "demo" / (id + ".ppm"), car_image(rng, make.grille));
    samples.push_back({{"id", id}, {"label", make.name}, {"image", "demo/" + id + ".ppm"}});
    annotations[id] = {"seg9", "seg10"};
  }
  write_json(dir / "manifest.json",
             {{"id", "cars"},
              {"title", "Car make recognition"},
              {"task", "image"},
              {"dataset", {{"id", dataset.id}, {"path", "../../datasets/cars"}, {"format", "images"}}},
              {"models", {mlp_id}},
              {"methods", {"lime", "kernel_shap"}},
              {"demo_samples", samples},
              {"annotations", "annotations.json"}});
  write_json(dir / "annotations.json", annotations);
}

std::string decimal(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

void make_weather(const fs::path& root, ModelStore& store) {
  const std::vector<std::string> directions{"N", "NNE", "NE", "ENE", "E", "ESE", "SE", "SSE",
                                            "S", "SSW", "SW", "WSW", "W", "WNW", "NW", "NNW"};
  Rng rng(303);
  std::string csv =
      "MinTemp,MaxTemp,Rainfall,WindGustDir,WindSpeed3pm,Humidity3pm,Pressure9am,RainToday,RainTomorrow\n";
  Json demos = Json::array();
  for (int i = 0; i < 300; ++i) {
    const double min_temp = normal(rng, 12.0, 5.0);
    const double max_temp = min_temp + 5.0 + 10.0 * rng.uniform();
    const double rainfall = rng.uniform() < 0.6 ? 0.0 : 0.2 + 19.8 * rng.uniform() * rng.uniform();
    const std::string& gust = pick(rng, directions);
    const int wind = 5 + static_cast<int>(rng.below(36));
    const int humidity = 20 + static_cast<int>(rng.below(76));
    const double pressure = normal(rng, 1013.0, 7.0);
    const bool rain_today = rainfall > 1.0;
    const double z = 0.09 * (humidity - 58) - 0.18 * (pressure - 1013.0) + 0.8 * (rain_today ? 1 : -1) +
                     0.05 * rainfall - 0.04 * (max_temp - 22.0) + normal(rng, 0.0, 0.8);
    const std::string label = z > 0 ? "Yes" : "No";
    const bool missing_pressure = i >= 5 && rng.uniform() < 0.12;
    csv += decimal(min_temp) + "," + decimal(max_temp) + "," + decimal(rainfall) + "," + gust + "," +
           std::to_string(wind) + "," + std::to_string(humidity) + "," +
           (missing_pressure ? std::string() : decimal(pressure)) + "," + (rain_today ? "Yes" : "No") +
           "," + label + "\n";
    if (i < 5) {
      demos.push_back({{"id", "day" + std::to_string(i + 1)},
                       {"label", label},
                       {"row",
                        {{"MinTemp", std::stod(decimal(min_temp))},
                         {"MaxTemp", std::stod(decimal(max_temp))},
                         {"Rainfall", std::stod(decimal(rainfall))},
                         {"WindGustDir", gust},
                         {"WindSpeed3pm", wind},
                         {"Humidity3pm", humidity},
                         {"Pressure9am", std::stod(decimal(pressure))},
                         {"RainToday", rain_today ? "Yes" : "No"}}}});
    }
  }
  const fs::path data = root / "datasets/weather/weather.csv";
  write_file_atomic(data, csv);
  const Dataset dataset = load_tabular_csv(data, "RainTomorrow", "weather");

  TrainConfig tree;
  tree.max_depth = 4;
  tree.min_leaf = 5;
  const std::string tree_id = train(store, dataset, ModelKind::tree, tree);
  TrainConfig logistic;
  logistic.epochs = 400;
  logistic.learning_rate = 0.3;
  const std::string logistic_id = train(store, dataset, ModelKind::logistic, logistic);

  const fs::path dir = root / "scenarios/weather";
  Json annotations = Json::object();
  for (const auto& d : demos) annotations[d["id"].get<std::string>()] = {"Humidity3pm", "Pressure9am"};
  write_json(dir / "manifest.json",
             {{"id", "weather"},
              {"title", "Rain tomorrow"},
              {"task", "tabular"},
              {"dataset",
               {{"id", dataset.id},
                {"path", "../../datasets/weather/weather.csv"},
                {"format", "csv"},
                {"label_column", "RainTomorrow"}}},
              {"models", {tree_id, logistic_id}},
              {"methods", {"lime", "kernel_shap", "permutation_importance"}},
              {"demo_samples", demos},
              {"annotations", "annotations.json"}});
  write_json(dir / "annotations.json", annotations);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: xplain_make_scenarios OUT_DIR\n";
    return 2;
  }
  try {
    const fs::path root = argv[1];
    for (const char* sub : {"datasets", "models", "scenarios"}) fs::remove_all(root / sub);
    fs::create_directories(root / "models");
    ModelStore store(root / "models");
    make_transport(root, store);
    make_cars(root, store);
    make_weather(root, store);
    const Registry registry(root);
    std::cout << registry.scenarios().size() << " scenarios written to " << root.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "xplain_make_scenarios: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
