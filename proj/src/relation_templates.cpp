#include <array>

#include "cooc/probe_dataset.hpp"

namespace cooc {
namespace {

// relation id, label, template, type, train, test
const std::array<RelationTemplate, 41> kTemplates{{
    {"P17", "country", "[X] is located in [Y] .", RelationType::many_to_one, 650, 262},
    {"P19", "place of birth", "[X] was born in [Y] .", RelationType::many_to_one, 537, 243},
    {"P20", "place of death", "[X] died in [Y] .", RelationType::many_to_one, 582, 235},
    {"P27", "country of citizenship", "[X] is [Y] citizen .", RelationType::many_to_many, 691, 267},
    {"P30", "continent", "[X] is located in [Y] .", RelationType::many_to_one, 657, 302},
    {"P31", "instance of", "[X] is a [Y] .", RelationType::many_to_many, 608, 274},
    {"P36", "capital", "The capital of [X] is [Y] .", RelationType::one_to_one, 330, 141},
    {"P37", "official language", "The official language of [X] is [Y] .", RelationType::many_to_one, 620, 280},
    {"P39", "position held", "[X] has the position of [Y] .", RelationType::many_to_many, 330, 155},
    {"P47", "shares border with", "[X] shares border with [Y] .", RelationType::many_to_many, 448, 203},
    {"P101", "field of work", "[X] works in the field of [Y] .", RelationType::many_to_many, 409, 164},
    {"P103", "native language", "The native language of [X] is [Y] .", RelationType::many_to_one, 635, 284},
    {"P106", "occupation", "[X] is a [Y] by profession .", RelationType::many_to_many, 569, 252},
    {"P108", "employer", "[X] works for [Y] .", RelationType::many_to_many, 274, 104},
    {"P127", "owned by", "[X] is owned by [Y] .", RelationType::many_to_one, 424, 195},
    {"P131", "located in the administrative territorial entity", "[X] is located in [Y] .", RelationType::many_to_one, 535, 240},
    {"P136", "genre", "[X] plays [Y] music .", RelationType::many_to_one, 616, 243},
    {"P138", "named after", "[X] is named after [Y] .", RelationType::many_to_one, 327, 140},
    {"P140", "religion", "[X] is affiliated with the [Y] religion .", RelationType::many_to_one, 299, 135},
    {"P159", "headquarters location", "The headquarter of [X] is in [Y] .", RelationType::many_to_one, 565, 236},
    {"P176", "manufacturer", "[X] is produced by [Y] .", RelationType::many_to_one, 666, 291},
    {"P178", "developer", "[X] is developed by [Y] .", RelationType::many_to_many, 411, 177},
    {"P190", "twinned administrative body", "[X] and [Y] are twin cities .", RelationType::many_to_many, 454, 217},
    {"P264", "record label", "[X] is represented by music label [Y] .", RelationType::many_to_one, 43, 10},
    {"P276", "location", "[X] is located in [Y] .", RelationType::many_to_one, 515, 251},
    {"P279", "subclass of", "[X] is a subclass of [Y] .", RelationType::many_to_one, 623, 280},
    {"P361", "part of", "[X] is part of [Y] .", RelationType::many_to_one, 533, 223},
    {"P364", "original language of film or TV show", "The original language of [X] is [Y] .", RelationType::many_to_one, 531, 225},
    {"P407", "language of work or name", "[X] was written in [Y] .", RelationType::many_to_one, 598, 259},
    {"P413", "position played on team / speciality", "[X] plays in [Y] position .", RelationType::many_to_one, 675, 277},
    {"P449", "original network", "[X] was originally aired on [Y] .", RelationType::many_to_one, 585, 223},
    {"P463", "member of", "[X] is a member of [Y] .", RelationType::many_to_many, 153, 50},
    {"P495", "country of origin", "[X] was created in [Y] .", RelationType::many_to_one, 652, 253},
    {"P527", "has part", "[X] consists of [Y] .", RelationType::many_to_many, 661, 295},
    {"P530", "diplomatic relation", "[X] maintains diplomatic relations with [Y] .", RelationType::many_to_many, 667, 283},
    {"P740", "location of formation", "[X] was founded in [Y] .", RelationType::many_to_one, 599, 244},
    {"P937", "work location", "[X] used to work in [Y] .", RelationType::many_to_many, 592, 261},
    {"P1001", "applies to jurisdiction", "[X] is a legal term in [Y] .", RelationType::many_to_many, 461, 203},
    {"P1303", "instrument", "[X] plays [Y] .", RelationType::many_to_many, 352, 161},
    {"P1376", "capital of", "[X] is the capital of [Y] .", RelationType::one_to_one, 120, 59},
    {"P1412", "languages spoken, written or signed", "[X] used to communicate in [Y] .", RelationType::many_to_many, 665, 259},
}};

}  // namespace

std::span<const RelationTemplate> builtin_templates() { return kTemplates; }

}  // namespace cooc
