#if defined(CONFIG_A) || defined(CONFIG_B) && defined(CONFIG_C)
int mix;
#endif
