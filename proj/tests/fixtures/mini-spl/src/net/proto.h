#if defined(CONFIG_TCP) || defined(CONFIG_UDP)
struct packet { int len; };
#endif
