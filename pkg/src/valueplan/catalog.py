"""Default catalog of value types.

Type 1 is the economic type and is always what the planner optimizes; the
remaining entries cover the broader human values that plans are constrained
on. The catalog is plain data: projects may declare any contiguous subset or
a completely different list.
"""

from __future__ import annotations

from .model import ValueType

DEFAULT_VALUE_NAMES: tuple[str, ...] = (
    "Wealth",
    "Equality",
    "Inner Harmony",
    "Social Power",
    "Pleasure",
    "Freedom",
    "A Spiritual Life",
    "Sense of Belonging",
    "Social Order",
    "An Exciting Life",
    "Meaning in Life",
    "Politeness",
    "National Security",
    "Self-Respect",
    "Reciprocation of Favours",
    "Creativity",
    "A World at Peace",
    "Respect for Tradition",
    "Mature Love",
    "Self-Discipline",
    "Privacy",
    "Family Security",
    "Social Recognition",
    "Unity with Nature",
    "A Varied Life",
    "Wisdom",
    "Authority",
    "True Friendship",
    "A World of Beauty",
    "Social Justice",
    "Independence",
    "Moderation",
    "Loyalty",
    "Ambition",
    "Broad-Mindedness",
    "Humility",
    "Daring",
    "Protecting the Environment",
    "Influence",
    "Honouring of Elders",
    "Choosing Own Goals",
    "Health",
    "Capability",
    "Accepting One's Portion in Life",
    "Honesty",
    "Preserving Public Image",
    "Obedience",
    "Intelligence",
    "Helpfulness",
    "Enjoying Life",
    "Devoutness",
    "Responsibility",
    "Curiosity",
    "Forgiveness",
    "Success",
    "Cleanliness",
    "Self-Indulgence",
    "Fairness",
)


def default_value_types(count: int | None = None) -> tuple[ValueType, ...]:
    """The default catalog, optionally truncated to the first ``count`` types."""
    names = DEFAULT_VALUE_NAMES if count is None else DEFAULT_VALUE_NAMES[:count]
    return tuple(ValueType(i + 1, name) for i, name in enumerate(names))
