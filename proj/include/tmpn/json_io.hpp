#pragma once

#include <json.hpp>

#include "tmpn/petri.hpp"
#include "tmpn/psystem.hpp"
#include "tmpn/translate.hpp"
#include "tmpn/verify.hpp"

namespace tmpn {

// Models. Field names mirror the domain types; `kind` discriminates.
nlohmann::json to_json(const timed_psystem& sys);
timed_psystem psystem_from_json(const nlohmann::json& j);
nlohmann::json to_json(const timed_petri_net& net);
timed_petri_net petri_from_json(const nlohmann::json& j);

// States: {contents, pending, clock, environment, environment_pending} and
// {marking, pending, gc}. Symbol/place names key the maps, delays key the
// pending buffers.
nlohmann::json to_json(const timed_psystem& sys, const configuration& c);
configuration configuration_from_json(const timed_psystem& sys, const nlohmann::json& j);
nlohmann::json to_json(const timed_petri_net& net, const net_state& s);
net_state net_state_from_json(const timed_petri_net& net, const nlohmann::json& j);

// Choices as {name: count} objects.
nlohmann::json to_json(const timed_psystem& sys, const step_choice& choice);
step_choice step_choice_from_json(const timed_psystem& sys, const nlohmann::json& j);
nlohmann::json to_json(const timed_petri_net& net, const firing_choice& choice);
firing_choice firing_choice_from_json(const timed_petri_net& net, const nlohmann::json& j);

nlohmann::json to_json(const verdict& v);

// Correspondence maps emitted next to translated models.
nlohmann::json map_to_json(const psystem_detiming& d, const timed_psystem& source);
nlohmann::json map_to_json(const petri_detiming& d, const timed_petri_net& source);
nlohmann::json map_to_json(const psystem_translation& t, const timed_psystem& source);

}  // namespace tmpn
