#include "signquest/bench/campaign.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "signquest/bench/metrics.hpp"
#include "signquest/util/parallel.hpp"
#include "signquest/util/rng.hpp"

namespace signquest {

using nlohmann::json;

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::signhunter: return "signhunter";
    case AttackKind::nes: return "nes";
    case AttackKind::zosignsgd: return "zosignsgd";
  }
  return "unknown";
}

AttackKind parse_attack_kind(std::string_view text) {
  if (text == "signhunter") return AttackKind::signhunter;
  if (text == "nes") return AttackKind::nes;
  if (text == "zosignsgd" || text == "zo") return AttackKind::zosignsgd;
  throw ConfigError("unknown attack '" + std::string(text) + "'");
}

AttackConfig CampaignConfig::attack_config(const AttackSpec& spec, Norm norm) const {
  AttackConfig c = AttackConfig::defaults(norm);
  if (norm == Norm::linf && epsilon_linf) c.epsilon = *epsilon_linf;
  if (norm == Norm::l2 && epsilon_l2) c.epsilon = *epsilon_l2;
  if (spec.kind == AttackKind::zosignsgd && norm == Norm::l2) c.learning_rate = 0.1;
  if (spec.fd_probe) c.fd_probe = *spec.fd_probe;
  if (spec.learning_rate) c.learning_rate = *spec.learning_rate;
  if (spec.samples) c.samples = *spec.samples;
  c.budget = budget;
  c.record_estimates = record_traces;
  return c;
}

namespace {

void allow_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, std::optional<T>& out) {
  if (!obj.contains(key)) return;
  T v{};
  read(obj, key, v);
  out = v;
}

std::vector<Norm> read_norms(const json& v) {
  std::vector<Norm> norms;
  auto one = [&](const json& item) {
    if (!item.is_string()) throw ConfigError("norm entries must be strings");
    const auto text = item.get<std::string>();
    if (text == "both") {
      norms = {Norm::linf, Norm::l2};
      return;
    }
    try {
      norms.push_back(parse_norm(text));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  };
  if (v.is_array()) {
    for (const auto& item : v) one(item);
  } else {
    one(v);
  }
  if (norms.empty()) throw ConfigError("at least one norm is required");
  return norms;
}

}  // namespace

CampaignConfig parse_campaign(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("campaign is not valid JSON: ") + e.what());
  }
  allow_keys(doc, "campaign",
             {"name", "seed", "budget", "num_inputs", "record_traces", "norm", "norms", "epsilon",
              "model", "dataset", "attacks"});

  CampaignConfig c;
  read(doc, "name", c.name);
  read(doc, "seed", c.seed);
  read(doc, "budget", c.budget);
  read(doc, "num_inputs", c.num_inputs);
  read(doc, "record_traces", c.record_traces);
  if (c.name.empty() || c.name.find('/') != std::string::npos) {
    throw ConfigError("campaign name must be a non-empty file name");
  }
  if (doc.contains("norm")) c.norms = read_norms(doc["norm"]);
  if (doc.contains("norms")) c.norms = read_norms(doc["norms"]);

  if (doc.contains("epsilon")) {
    const json& e = doc["epsilon"];
    if (e.is_number()) {
      c.epsilon_linf = c.epsilon_l2 = e.get<double>();
    } else {
      allow_keys(e, "epsilon", {"linf", "l2"});
      read_opt(e, "linf", c.epsilon_linf);
      read_opt(e, "l2", c.epsilon_l2);
    }
    for (auto eps : {c.epsilon_linf, c.epsilon_l2}) {
      if (eps && *eps < 0.0) throw ConfigError("epsilon must be non-negative");
    }
  }

  if (doc.contains("model")) {
    const json& m = doc["model"];
    allow_keys(m, "model", {"type", "hidden", "epochs", "learning_rate", "batch_size", "seed"});
    std::string type = "mlp";
    read(m, "type", type);
    if (type != "mlp") throw ConfigError("unsupported model type '" + type + "'");
    read(m, "hidden", c.model.hidden);
    read(m, "epochs", c.model.epochs);
    read(m, "learning_rate", c.model.learning_rate);
    read(m, "batch_size", c.model.batch_size);
    read(m, "seed", c.model.seed);
    if (c.model.hidden == 0 || c.model.batch_size == 0) {
      throw ConfigError("model hidden size and batch size must be positive");
    }
  }

  if (doc.contains("dataset")) {
    const json& d = doc["dataset"];
    allow_keys(d, "dataset",
               {"type", "train_samples", "test_samples", "dim", "classes", "spread", "seed",
                "train_images", "train_labels", "test_images", "test_labels"});
    std::string type = "blobs";
    read(d, "type", type);
    read(d, "train_samples", c.dataset.train_samples);
    read(d, "test_samples", c.dataset.test_samples);
    if (type == "blobs") {
      c.dataset.source = DatasetSpec::Source::blobs;
      read(d, "dim", c.dataset.blobs.dim);
      read(d, "classes", c.dataset.blobs.classes);
      read(d, "spread", c.dataset.blobs.spread);
      read(d, "seed", c.dataset.blobs.seed);
      if (c.dataset.train_samples == 0 || c.dataset.test_samples == 0 || c.dataset.blobs.dim == 0 ||
          c.dataset.blobs.classes < 2) {
        throw ConfigError("blob dataset needs positive sizes and at least two classes");
      }
    } else if (type == "idx") {
      c.dataset.source = DatasetSpec::Source::idx;
      std::string ti, tl, ei, el;
      read(d, "train_images", ti);
      read(d, "train_labels", tl);
      read(d, "test_images", ei);
      read(d, "test_labels", el);
      if (ti.empty() || tl.empty() || ei.empty() || el.empty()) {
        throw ConfigError("idx dataset needs train_images, train_labels, test_images, test_labels");
      }
      c.dataset.train_images = ti;
      c.dataset.train_labels = tl;
      c.dataset.test_images = ei;
      c.dataset.test_labels = el;
    } else {
      throw ConfigError("unsupported dataset type '" + type + "'");
    }
  }

  if (doc.contains("attacks")) {
    const json& list = doc["attacks"];
    if (!list.is_array() || list.empty()) throw ConfigError("attacks must be a non-empty array");
    c.attacks.clear();
    for (const json& item : list) {
      AttackSpec spec;
      if (item.is_string()) {
        spec.kind = parse_attack_kind(item.get<std::string>());
      } else {
        allow_keys(item, "attack", {"name", "fd_probe", "learning_rate", "samples"});
        std::string name;
        read(item, "name", name);
        spec.kind = parse_attack_kind(name);
        read_opt(item, "fd_probe", spec.fd_probe);
        read_opt(item, "learning_rate", spec.learning_rate);
        read_opt(item, "samples", spec.samples);
        if (spec.samples && *spec.samples == 0) throw ConfigError("samples must be positive");
        if (spec.fd_probe && *spec.fd_probe <= 0.0) throw ConfigError("fd_probe must be positive");
      }
      c.attacks.push_back(spec);
    }
  }
  return c;
}

CampaignConfig load_campaign(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read campaign file: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_campaign(text.str());
}

namespace {

std::pair<Dataset, Dataset> load_data(const DatasetSpec& spec) {
  if (spec.source == DatasetSpec::Source::idx) {
    return {load_idx(spec.train_images, spec.train_labels, spec.train_samples),
            load_idx(spec.test_images, spec.test_labels, spec.test_samples)};
  }
  BlobConfig blobs = spec.blobs;
  blobs.samples = spec.train_samples + spec.test_samples;
  const Dataset all = make_blobs(blobs);
  return {all.slice(0, spec.train_samples), all.slice(spec.train_samples, spec.test_samples)};
}

AttackRecord dispatch(AttackKind kind, ModelLossOracle& oracle, std::span<const double> x, int label,
                      const AttackConfig& config) {
  switch (kind) {
    case AttackKind::signhunter: return signhunter_attack(oracle, x, label, config);
    case AttackKind::nes: return nes_attack(oracle, x, label, config);
    case AttackKind::zosignsgd: return zosignsgd_attack(oracle, x, label, config);
  }
  throw std::logic_error("unhandled attack kind");
}

AttackSummary summarise(std::string attack, Norm norm, const AttackConfig& ac,
                        std::vector<AttackOutcome> outcomes, bool traces) {
  AttackSummary s;
  s.attack = std::move(attack);
  s.norm = norm;
  s.epsilon = ac.epsilon;
  s.budget = ac.budget;
  std::vector<std::uint64_t> success_queries;
  double total = 0.0, total_excl = 0.0;
  std::vector<const std::vector<double>*> losses, hams, coss;
  for (const auto& o : outcomes) {
    s.violations += o.violations;
    s.accounting_errors += o.accounting_error;
    if (o.status == AttackStatus::misclassified_at_start) {
      ++s.excluded;
      continue;
    }
    ++s.attempted;
    losses.push_back(&o.loss_trace);
    hams.push_back(&o.hamming_trace);
    coss.push_back(&o.cosine_trace);
    if (o.status == AttackStatus::success) {
      ++s.successes;
      success_queries.push_back(o.queries);
      total += static_cast<double>(o.queries);
      total_excl += static_cast<double>(o.queries - o.base_queries);
    }
  }
  if (s.attempted > 0) {
    s.failure_rate = static_cast<double>(s.attempted - s.successes) / static_cast<double>(s.attempted);
  }
  if (s.successes > 0) {
    s.avg_queries = total / static_cast<double>(s.successes);
    s.avg_queries_excl_base = total_excl / static_cast<double>(s.successes);
  }
  s.expected_spend = expected_spend(s.failure_rate, s.avg_queries, s.budget);
  s.success_curve = success_curve(std::move(success_queries), s.attempted);
  if (traces) {
    s.avg_loss = padded_mean(losses);
    s.avg_hamming = padded_mean(hams);
    s.avg_cosine = padded_mean(coss);
  }
  s.outcomes = std::move(outcomes);
  return s;
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& config) {
  if (config.attacks.empty() || config.norms.empty()) throw ConfigError("nothing to run");
  auto [train, test] = load_data(config.dataset);
  if (train.dim != test.dim) throw ConfigError("train and test dimensions differ");

  CampaignResult result;
  result.config = config;
  const TrainedMlp trained = train_mlp(train, config.model);
  const MlpClassifier& model = trained.model;
  result.train_accuracy = trained.train_accuracy;
  result.test_accuracy = accuracy(model, test);

  const std::size_t inputs = std::min(config.num_inputs, test.size());
  struct Pair {
    AttackSpec spec;
    Norm norm;
    AttackConfig config;
  };
  std::vector<Pair> pairs;
  for (const auto& spec : config.attacks) {
    for (Norm norm : config.norms) pairs.push_back({spec, norm, config.attack_config(spec, norm)});
  }
  std::vector<std::vector<AttackOutcome>> outcomes(pairs.size(), std::vector<AttackOutcome>(inputs));

  parallel_for(pairs.size() * inputs, config.jobs == 0 ? default_jobs() : config.jobs,
               [&](std::size_t task) {
    const std::size_t p = task / inputs;
    const std::size_t img = task % inputs;
    const Pair& pair = pairs[p];
    const auto x = test.row(img);
    const int label = test.labels[img];

    AttackConfig ac = pair.config;
    ac.seed = derive_seed(config.seed, {p, img});
    const PerturbationBall ball{pair.norm, {x.begin(), x.end()}, ac.epsilon, model.input_range()};
    std::uint64_t violations = 0;
    ModelLossOracle oracle(model);
    oracle.set_observer([&](std::span<const double> q, int) {
      if (!ball.contains(q)) ++violations;
    });

    AttackRecord rec = dispatch(pair.spec.kind, oracle, x, label, ac);
    AttackOutcome& o = outcomes[p][img];
    o.image_id = img;
    o.status = rec.status;
    o.queries = rec.queries;
    o.base_queries = rec.base_queries;
    o.final_loss = rec.final_loss;
    o.violations = violations;
    o.accounting_error = oracle.query_count() > rec.queries ? oracle.query_count() - rec.queries
                                                            : rec.queries - oracle.query_count();
    if (config.record_traces && rec.status != AttackStatus::misclassified_at_start) {
      const auto sims = similarity_traces(rec, model.gradient(x, label));
      o.hamming_trace = sims.hamming;
      o.cosine_trace = sims.cosine;
      o.loss_trace = std::move(rec.loss_trace);
    }
  });

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    result.summaries.push_back(summarise(to_string(pairs[p].spec.kind), pairs[p].norm, pairs[p].config,
                                         std::move(outcomes[p]), config.record_traces));
  }
  return result;
}

}  // namespace signquest
