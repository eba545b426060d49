#include "rb/env/episode_log.hpp"

#include <ostream>
#include <istream>
#include <string>

#include <json.hpp>

namespace rb::env {

namespace {

nlohmann::json state_to_json(const HandcraftedState& s) {
  nlohmann::json j;
  if (s.game == GameId::kRws) {
    j["inventories"] = {s.inventories[0], s.inventories[1]};
  } else {
    j["tiger_door"] = s.tiger_door == TigerDoor::kLeft ? "TL" : "TR";
  }
  return j;
}

HandcraftedState state_from_json(const nlohmann::json& j, GameId game) {
  HandcraftedState s;
  s.game = game;
  if (game == GameId::kRws) {
    s.inventories[0] = j.at("inventories").at(0).get<Inventory>();
    s.inventories[1] = j.at("inventories").at(1).get<Inventory>();
  } else {
    s.tiger_door = j.at("tiger_door").get<std::string>() == "TL"
                       ? TigerDoor::kLeft
                       : TigerDoor::kRight;
  }
  return s;
}

}  // namespace

void write_episode_log(std::ostream& out,
                       const std::vector<EpisodeRecord>& records) {
  for (const auto& r : records) {
    nlohmann::json j;
    j["round"] = r.round;
    j["actions"] = r.actions;
    j["rewards"] = r.rewards;
    j["state"] = state_to_json(r.state);
    out << j.dump() << '\n';
  }
}

std::vector<EpisodeRecord> read_episode_log(std::istream& in, GameId game) {
  std::vector<EpisodeRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    EpisodeRecord r;
    r.round = j.at("round").get<int>();
    r.actions = j.at("actions").get<std::vector<int>>();
    r.rewards = j.at("rewards").get<std::vector<double>>();
    r.state = state_from_json(j.at("state"), game);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace rb::env
